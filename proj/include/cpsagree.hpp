#ifndef CPSAGREE_HPP
#define CPSAGREE_HPP

#include "cpsagree/error.hpp"
#include "cpsagree/rational.hpp"
#include "cpsagree/ext_value.hpp"
#include "cpsagree/event.hpp"
#include "cpsagree/set_family.hpp"
#include "cpsagree/cps.hpp"
#include "cpsagree/epistemic.hpp"
#include "cpsagree/assumptions.hpp"
#include "cpsagree/renyi.hpp"
#include "cpsagree/augmentation.hpp"
#include "cpsagree/agreement.hpp"
#include "cpsagree/instances.hpp"
#include "cpsagree/instance_io.hpp"

#endif  // CPSAGREE_HPP
