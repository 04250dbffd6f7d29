#pragma once

#include "starmetric/embed_result.hpp"
#include "starmetric/errors.hpp"
#include "starmetric/extract.hpp"
#include "starmetric/generate.hpp"
#include "starmetric/lambda_graph.hpp"
#include "starmetric/linfun.hpp"
#include "starmetric/metric.hpp"
#include "starmetric/metric_io.hpp"
#include "starmetric/oracle.hpp"
#include "starmetric/parametric.hpp"
#include "starmetric/rational.hpp"
