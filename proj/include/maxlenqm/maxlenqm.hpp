#pragma once

// Deformed-algebra quantum mechanics with a maximal length and a minimal
// momentum: position-dependent commutator, weighted measure, plane-wave
// momentum eigenstates on a finite chart, quasi-momentum transforms, the
// generalized uncertainty relation, and the n-dimensional extension.

#include "algebra.hpp"
#include "checks.hpp"
#include "errors.hpp"
#include "jet.hpp"
#include "ndim.hpp"
#include "operators.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "states.hpp"
#include "transforms.hpp"
#include "uncertainty.hpp"
#include "wavefunction.hpp"
