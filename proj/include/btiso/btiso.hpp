#pragma once

// Umbrella header.

#include "btiso/binomial.hpp"
#include "btiso/config.hpp"
#include "btiso/corpus.hpp"
#include "btiso/cover.hpp"
#include "btiso/equality.hpp"
#include "btiso/error.hpp"
#include "btiso/exact.hpp"
#include "btiso/hanner.hpp"
#include "btiso/index_set.hpp"
#include "btiso/inequality.hpp"
#include "btiso/json_io.hpp"
#include "btiso/linear_program.hpp"
#include "btiso/parallel.hpp"
#include "btiso/polytope.hpp"
#include "btiso/quadrature.hpp"
#include "btiso/rng.hpp"
