#pragma once

#include "oerq/analysis.hpp"
#include "oerq/benchmark.hpp"
#include "oerq/classifier.hpp"
#include "oerq/error.hpp"
#include "oerq/evaluation.hpp"
#include "oerq/harvester.hpp"
#include "oerq/ingestion.hpp"
#include "oerq/metadata.hpp"
#include "oerq/pipeline.hpp"
#include "oerq/random.hpp"
#include "oerq/scoring.hpp"
#include "oerq/synthetic.hpp"
#include "oerq/text.hpp"
