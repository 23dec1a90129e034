#ifndef LOWREG_EQUATION_HPP
#define LOWREG_EQUATION_HPP

namespace lowreg {

// The two model equations on the torus [0, 2π):
//   nls:  i∂ₜu + Δu = |u|²u          (complex u)
//   kdv:  ∂ₜu + ∂ₓ³u = ½∂ₓu²         (real u)
enum class Equation { nls, kdv };

}  // namespace lowreg

#endif
