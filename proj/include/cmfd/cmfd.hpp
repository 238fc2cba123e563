#ifndef CMFD_CMFD_HPP
#define CMFD_CMFD_HPP

#include "cmfd/codec.hpp"
#include "cmfd/config.hpp"
#include "cmfd/corpus.hpp"
#include "cmfd/degrade.hpp"
#include "cmfd/errors.hpp"
#include "cmfd/eval.hpp"
#include "cmfd/features.hpp"
#include "cmfd/image.hpp"
#include "cmfd/kv.hpp"
#include "cmfd/matcher.hpp"
#include "cmfd/morphology.hpp"
#include "cmfd/olbm.hpp"
#include "cmfd/parallel.hpp"

#endif  // CMFD_CMFD_HPP
