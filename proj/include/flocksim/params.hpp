#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace flocksim {

// Thrown when a trajectory leaves the finite range; carries the offending step.
class BlowupError : public std::runtime_error {
public:
    BlowupError(long long step, const std::string& what_arg)
        : std::runtime_error(what_arg), step_(step) {}
    long long step() const { return step_; }

private:
    long long step_;
};

// Regularization triple xi = (eps, delta, nu): mollifier radius, inverse
// velocity scale of the cutoff, and the density floor in the alignment
// denominator. All strictly positive.
struct Xi {
    double eps = 1.0;
    double delta = 1.0;
    double nu = 1.0;

    void validate() const;
};

// Model constants: friction gamma, potential strength lambda, alignment
// strength beta, diffusion sigma, plus the regularization triple and the
// spatial dimension (d >= 3).
struct Params {
    double gamma = 1.0;
    double lambda = 1.0;
    double beta = 1.0;
    double sigma = 1.0;
    Xi xi{};
    int dim = 3;

    void validate() const;
};

// The interaction kernel is defined for d >= 3 only.
void check_dim(int d);

inline void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

inline void check_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be nonnegative and finite");
}

}  // namespace flocksim
