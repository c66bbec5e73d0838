#pragma once

// Sparse mixture of logistic-regression experts for process outcome
// prediction: event-log ingestion, aggregation encoding, gated training
// with feature-block pruning, AUC evaluation, and explanation reports.

#include "moelr/compare.hpp"
#include "moelr/csv.hpp"
#include "moelr/encoding.hpp"
#include "moelr/errors.hpp"
#include "moelr/evaluation.hpp"
#include "moelr/event_log.hpp"
#include "moelr/explain.hpp"
#include "moelr/model.hpp"
#include "moelr/reference.hpp"
#include "moelr/rng.hpp"
#include "moelr/timeutil.hpp"
#include "moelr/training.hpp"
#include "moelr/version.hpp"
