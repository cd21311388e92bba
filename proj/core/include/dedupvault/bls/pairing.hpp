#ifndef DEDUPVAULT_BLS_PAIRING_HPP
#define DEDUPVAULT_BLS_PAIRING_HPP

#include "dedupvault/bls/curve.hpp"

namespace dedupvault::bls {

// Optimal ate pairing e: G1 x G2 -> GT (the order-r subgroup of Fp12*).
// Returns the identity if either input is the point at infinity.
Fp12 pairing(const G1& p, const G2& q);

// e(g1, g2), cached.
const Fp12& gt_generator();

}  // namespace dedupvault::bls

#endif
