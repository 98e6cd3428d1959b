#pragma once

// Numerical laboratory for block summability: exponent calculus for
// inclusion and Hardy-Littlewood type inequalities, anisotropic mixed norms
// of block restrictions, multilinear form norm estimation, and deterministic
// experiment sweeps.

#include "blocksum/exponent.hpp"
#include "blocksum/exponent_rules.hpp"
#include "blocksum/form_norm.hpp"
#include "blocksum/harness.hpp"
#include "blocksum/holder.hpp"
#include "blocksum/mixed_norm.hpp"
#include "blocksum/numeric.hpp"
#include "blocksum/parse.hpp"
#include "blocksum/partition.hpp"
#include "blocksum/rng.hpp"
#include "blocksum/tensor.hpp"
#include "blocksum/tensor_io.hpp"
#include "blocksum/weak_norm.hpp"
#include "blocksum/witness.hpp"
