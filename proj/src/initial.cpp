#include "flocksim/initial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "flocksim/noise.hpp"

namespace flocksim {

namespace {

constexpr uint32_t kStream = static_cast<uint32_t>(NoiseStream::initial_data);

// 2*dim standard normals for particle i from blocks 0..dim-1.
void draw_normals(uint64_t seed, int64_t i, int dim, std::vector<double>& z) {
    z.resize(2 * dim);
    for (int b = 0; b < dim; ++b)
        philox::normal_pair(seed, kStream, static_cast<uint32_t>(i), 0, static_cast<uint32_t>(b),
                            z[2 * b], z[2 * b + 1]);
}

}  // namespace

std::string InitialCondition::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::gaussian:
            os << "gaussian(" << mean << "," << scale;
            if (vdrift != 0.0) os << "," << vdrift;
            os << ")";
            break;
        case Kind::uniform_ball:
            os << "uniform-ball(" << radius << ")";
            break;
        case Kind::two_cluster:
            os << "two-cluster(" << separation << ")";
            break;
    }
    return os.str();
}

InitialCondition parse_initial(const std::string& text) {
    InitialCondition ic;
    std::string name = text;
    std::vector<double> args;
    const auto open = text.find('(');
    if (open != std::string::npos) {
        if (text.back() != ')')
            throw std::invalid_argument("initial descriptor: missing ')' in '" + text + "'");
        name = text.substr(0, open);
        std::string inner = text.substr(open + 1, text.size() - open - 2);
        std::istringstream is(inner);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            size_t pos = 0;
            double v = std::stod(tok, &pos);
            args.push_back(v);
        }
    }
    if (name == "gaussian") {
        ic.kind = InitialCondition::Kind::gaussian;
        if (args.size() > 0) ic.mean = args[0];
        if (args.size() > 1) ic.scale = args[1];
        if (args.size() > 2) ic.vdrift = args[2];
        if (!(ic.scale > 0)) throw std::invalid_argument("initial gaussian: scale must be > 0");
    } else if (name == "uniform-ball") {
        ic.kind = InitialCondition::Kind::uniform_ball;
        if (args.size() > 0) ic.radius = args[0];
        if (!(ic.radius > 0)) throw std::invalid_argument("initial uniform-ball: radius must be > 0");
    } else if (name == "two-cluster") {
        ic.kind = InitialCondition::Kind::two_cluster;
        if (args.size() > 0) ic.separation = args[0];
        if (!(ic.separation >= 0)) throw std::invalid_argument("initial two-cluster: separation must be >= 0");
    } else {
        throw std::invalid_argument("unknown initial descriptor '" + name +
                                    "' (expected gaussian, uniform-ball or two-cluster)");
    }
    return ic;
}

PhaseEnsemble sample_initial(const InitialCondition& ic, int64_t n, int dim, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_initial: n must be >= 1");
    if (dim < 1) throw std::invalid_argument("sample_initial: dim must be >= 1");

    PhaseEnsemble ens(n, dim);
    std::vector<double> z;
    for (int64_t i = 0; i < n; ++i) {
        draw_normals(seed, i, dim, z);
        double* x = ens.pos.data() + i * dim;
        double* v = ens.vel.data() + i * dim;
        for (int c = 0; c < dim; ++c) v[c] = z[dim + c];

        switch (ic.kind) {
            case InitialCondition::Kind::gaussian:
                for (int c = 0; c < dim; ++c) x[c] = ic.mean + ic.scale * z[c];
                v[0] += ic.vdrift;
                break;
            case InitialCondition::Kind::uniform_ball: {
                // radius r = R u^{1/d}, direction from the normal draws
                double norm2 = 0.0;
                for (int c = 0; c < dim; ++c) norm2 += z[c] * z[c];
                const double u = philox::uniform(seed, kStream, static_cast<uint32_t>(i), 1, 0);
                const double r = ic.radius * std::pow(u, 1.0 / dim);
                const double inv = norm2 > 0.0 ? r / std::sqrt(norm2) : 0.0;
                for (int c = 0; c < dim; ++c) x[c] = inv * z[c];
                break;
            }
            case InitialCondition::Kind::two_cluster: {
                const double u = philox::uniform(seed, kStream, static_cast<uint32_t>(i), 1, 0);
                const double side = u < 0.5 ? -0.5 : 0.5;
                for (int c = 0; c < dim; ++c) x[c] = z[c];
                x[0] += side * ic.separation;
                break;
            }
        }
    }
    return ens;
}

}  // namespace flocksim
