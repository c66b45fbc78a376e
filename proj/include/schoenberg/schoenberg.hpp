#pragma once

#include "schoenberg/types.hpp"
#include "schoenberg/polynomial.hpp"
#include "schoenberg/rootfinding.hpp"
#include "schoenberg/matrix.hpp"
#include "schoenberg/inequalities.hpp"
#include "schoenberg/sendov.hpp"
#include "schoenberg/search.hpp"
#include "schoenberg/records.hpp"
