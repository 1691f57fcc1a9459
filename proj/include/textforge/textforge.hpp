#pragma once

// Umbrella header. Pulls in everything except the HTTP transport
// (textforge/chat_http.hpp), which is heavy to compile and only needed by
// code that talks to a live service.

#include "textforge/align.hpp"
#include "textforge/chat_client.hpp"
#include "textforge/config.hpp"
#include "textforge/dedup.hpp"
#include "textforge/error.hpp"
#include "textforge/eval.hpp"
#include "textforge/finetune.hpp"
#include "textforge/geometry.hpp"
#include "textforge/jsonl.hpp"
#include "textforge/ocr.hpp"
#include "textforge/overlay.hpp"
#include "textforge/pretrain.hpp"
#include "textforge/samples.hpp"
#include "textforge/span.hpp"
#include "textforge/stats.hpp"
#include "textforge/templates.hpp"
