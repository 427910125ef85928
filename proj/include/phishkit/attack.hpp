#pragma once

#include "attack/recipe.hpp"
#include "attack/runner.hpp"
#include "attack/search.hpp"
#include "attack/tables.hpp"
#include "attack/transformations.hpp"
#include "attack/victim.hpp"
