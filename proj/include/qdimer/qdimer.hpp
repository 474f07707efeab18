#pragma once

#include "qdimer/angmom.hpp"
#include "qdimer/basis.hpp"
#include "qdimer/config.hpp"
#include "qdimer/feasibility.hpp"
#include "qdimer/gates.hpp"
#include "qdimer/half_int.hpp"
#include "qdimer/hamiltonian.hpp"
#include "qdimer/io.hpp"
#include "qdimer/parallel.hpp"
#include "qdimer/qubits.hpp"
#include "qdimer/reports.hpp"
#include "qdimer/spectra.hpp"
#include "qdimer/units.hpp"
