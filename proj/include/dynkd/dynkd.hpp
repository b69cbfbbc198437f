#ifndef DYNKD_DYNKD_HPP
#define DYNKD_DYNKD_HPP

#include "dynkd/balance.hpp"
#include "dynkd/builder.hpp"
#include "dynkd/node.hpp"
#include "dynkd/superkey.hpp"
#include "dynkd/tree.hpp"
#include "dynkd/verify.hpp"

#endif  // DYNKD_DYNKD_HPP
