#ifndef WT_WT_HPP
#define WT_WT_HPP

#include "bench.hpp"
#include "bitvec.hpp"
#include "construct.hpp"
#include "errors.hpp"
#include "ingest.hpp"
#include "memory.hpp"
#include "parallel.hpp"
#include "sequence.hpp"
#include "wavelet_tree.hpp"

#endif
