#pragma once

#include "ncdg/automaton.hpp"
#include "ncdg/cfg.hpp"
#include "ncdg/codec.hpp"
#include "ncdg/error.hpp"
#include "ncdg/graph.hpp"
#include "ncdg/inference.hpp"
#include "ncdg/latent.hpp"
#include "ncdg/ontology.hpp"
