#pragma once

#include "tgif/agreement.hpp"
#include "tgif/checkpoint.hpp"
#include "tgif/corpus.hpp"
#include "tgif/emotion.hpp"
#include "tgif/error.hpp"
#include "tgif/grad_check.hpp"
#include "tgif/instances.hpp"
#include "tgif/jsonl.hpp"
#include "tgif/loss.hpp"
#include "tgif/meld_import.hpp"
#include "tgif/metrics.hpp"
#include "tgif/model.hpp"
#include "tgif/nn.hpp"
#include "tgif/optim.hpp"
#include "tgif/params.hpp"
#include "tgif/report.hpp"
#include "tgif/rng.hpp"
#include "tgif/tape.hpp"
#include "tgif/taxonomy.hpp"
#include "tgif/taxonomy_data.hpp"
#include "tgif/tensor.hpp"
#include "tgif/train.hpp"
