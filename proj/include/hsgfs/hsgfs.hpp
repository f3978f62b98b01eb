#pragma once

// Convenience include for the whole library.

#include "hsgfs/dataset.hpp"
#include "hsgfs/knn.hpp"
#include "hsgfs/optimizer.hpp"
#include "hsgfs/parallel.hpp"
#include "hsgfs/ranking.hpp"
#include "hsgfs/report.hpp"
#include "hsgfs/rng.hpp"
#include "hsgfs/synthetic.hpp"
