#pragma once

#include "models/forest.hpp"
#include "models/grid.hpp"
#include "models/io.hpp"
#include "models/knn.hpp"
#include "models/logreg.hpp"
#include "models/mlp.hpp"
#include "models/svm.hpp"
#include "models/types.hpp"
