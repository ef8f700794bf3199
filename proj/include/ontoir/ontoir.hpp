#pragma once

#include "algebra.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "graph.hpp"
#include "index.hpp"
#include "index_io.hpp"
#include "journey.hpp"
#include "ntriples.hpp"
#include "query.hpp"
#include "reasoner.hpp"
#include "rules.hpp"
#include "tokenizer.hpp"
