#pragma once

#include "attack.hpp"
#include "controllability.hpp"
#include "enc_rer.hpp"
#include "enumeration.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "random.hpp"
