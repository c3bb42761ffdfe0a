#include "ngd/emergent.hpp"

namespace ngd {

namespace {

long mod(long x, long n) { return ((x % n) + n) % n; }

long power_mod(long a, long k, long n) {
  long r = 1 % n;
  for (long i = 0; i < k; ++i) r = mod(r * a, n);
  return r;
}

long inverse_mod(long a, long n) {
  for (long b = 1; b < n; ++b)
    if (mod(a * b, n) == 1) return b;
  throw PreconditionError("scale " + std::to_string(a) + " is not a unit mod " + std::to_string(n));
}

}  // namespace

GammaIrq<long, long> cyclic_gamma_irq(long n, long a) {
  if (n < 2) throw PreconditionError("cyclic irq needs n >= 2");
  const long ai = inverse_mod(mod(a, n), n);
  GammaIrq<long, long> Q;
  Q.circ = [n, a, ai](long k, long x, long y) {
    const long factor = k >= 0 ? power_mod(mod(a, n), k, n) : power_mod(ai, -k, n);
    return mod(x + factor * (y - x), n);
  };
  Q.compose = [](long k, long l) { return k + l; };
  Q.inverse = [](long k) { return -k; };
  Q.show_scale = [](long k) { return std::to_string(k); };
  return Q;
}

Irq<long> cyclic_irq(long n, long a) { return cyclic_gamma_irq(n, a).at(1); }

Irq<long> left_projection_irq() {
  return {[](long x, long) { return x; }, [](long x, long) { return x; }};
}

Irq<long> right_zero_irq() {
  return {[](long, long y) { return y; }, [](long, long y) { return y; }};
}

}  // namespace ngd
