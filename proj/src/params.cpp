#include "flocksim/params.hpp"

namespace flocksim {

void check_dim(int d) {
    if (d < 3) throw std::invalid_argument("dim must be >= 3, got " + std::to_string(d));
}

void Xi::validate() const {
    check_positive(eps, "xi.eps");
    check_positive(delta, "xi.delta");
    check_positive(nu, "xi.nu");
}

void Params::validate() const {
    check_nonnegative(gamma, "gamma");
    check_nonnegative(lambda, "lambda");
    check_nonnegative(beta, "beta");
    check_nonnegative(sigma, "sigma");
    xi.validate();
    check_dim(dim);
}

}  // namespace flocksim
