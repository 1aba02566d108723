#pragma once

#include "causalmec/constructions.hpp"
#include "causalmec/dsep.hpp"
#include "causalmec/enumerate.hpp"
#include "causalmec/equivalence.hpp"
#include "causalmec/error.hpp"
#include "causalmec/experiments.hpp"
#include "causalmec/graph.hpp"
#include "causalmec/graph_io.hpp"
#include "causalmec/limits.hpp"
#include "causalmec/log_weight.hpp"
#include "causalmec/parallel.hpp"
#include "causalmec/rng.hpp"
#include "causalmec/sampling.hpp"
#include "causalmec/vertex_set.hpp"
#include "causalmec/version.hpp"
