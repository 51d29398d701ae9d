#ifndef BKMEANS_BKMEANS_HPP
#define BKMEANS_BKMEANS_HPP

#include "bkmeans/bench.hpp"
#include "bkmeans/breathing.hpp"
#include "bkmeans/datagen.hpp"
#include "bkmeans/geometry.hpp"
#include "bkmeans/io.hpp"
#include "bkmeans/lloyd.hpp"
#include "bkmeans/matrix.hpp"
#include "bkmeans/metrics.hpp"
#include "bkmeans/rng.hpp"
#include "bkmeans/seeding.hpp"
#include "bkmeans/svg.hpp"

#endif
