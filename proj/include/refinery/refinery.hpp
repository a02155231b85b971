#pragma once

#include "check.hpp"
#include "corpus.hpp"
#include "kernel.hpp"
#include "refine/action.hpp"
#include "refine/divergence.hpp"
#include "refine/eventb.hpp"
#include "refine/nontransitivity.hpp"
#include "refine/relabel.hpp"
#include "refine/simulation.hpp"
#include "refine/trace.hpp"
#include "refine/weak.hpp"
#include "speclang/ground.hpp"
#include "speclang/printer.hpp"
