#pragma once

#include "attack.hpp"
#include "corpus.hpp"
#include "embeddings.hpp"
#include "features.hpp"
#include "metrics.hpp"
#include "models.hpp"
#include "preprocess.hpp"
