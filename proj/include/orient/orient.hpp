#pragma once

#include "orient/error.hpp"
#include "orient/geometry.hpp"
#include "orient/orientation_pdf.hpp"
#include "orient/records.hpp"
#include "orient/text.hpp"
#include "orient/ingest.hpp"
#include "orient/pose.hpp"
#include "orient/ball.hpp"
#include "orient/fusion.hpp"
#include "orient/svm.hpp"
#include "orient/coarse.hpp"
#include "orient/config.hpp"
#include "orient/pipeline.hpp"
#include "orient/evaluation.hpp"
#include "orient/maps.hpp"
#include "orient/svg.hpp"
