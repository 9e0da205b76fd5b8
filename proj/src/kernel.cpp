#include "ajel/kernel.hpp"

#include "ajel/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace ajel {

Sample::Sample(std::string label, std::size_t dim, std::vector<double> flat)
    : label_(std::move(label)), dim_(dim), flat_(std::move(flat)) {
    if (dim_ == 0) fail(ErrorKind::parameter, "sample '" + label_ + "': dimension must be >= 1");
    if (flat_.empty()) fail(ErrorKind::size, "sample '" + label_ + "' is empty");
    if (flat_.size() % dim_ != 0) {
        fail(ErrorKind::parameter, "sample '" + label_ + "': value count is not a multiple of the dimension");
    }
    for (std::size_t k = 0; k < flat_.size(); ++k) {
        if (!std::isfinite(flat_[k])) {
            fail(ErrorKind::numeric, "sample '" + label_ + "': non-finite value in observation " +
                                         std::to_string(k / dim_));
        }
    }
}

Sample Sample::from_scalars(std::vector<double> xs, std::string label) {
    return Sample(std::move(label), 1, std::move(xs));
}

std::vector<double> Sample::column(std::size_t k) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = flat_[i * dim_ + k];
    return out;
}

Kernel::Kernel(std::string name, int dx, int dy, std::size_t dim, EvalFn eval, FastForm fast)
    : name_(std::move(name)), degree_x_(dx), degree_y_(dy), dim_(dim), eval_(std::move(eval)), fast_(fast) {
    if (dx < 1 || dy < 0) fail(ErrorKind::parameter, "kernel '" + name_ + "': degrees must be >= 1");
    if (dx + dy > max_degree) {
        fail(ErrorKind::parameter, "kernel '" + name_ + "': total degree exceeds " + std::to_string(max_degree));
    }
    if (!eval_) fail(ErrorKind::parameter, "kernel '" + name_ + "': missing evaluation function");
}

Kernel Kernel::one_sample(std::string name, int degree, std::size_t dim, EvalFn eval, FastForm fast) {
    return Kernel(std::move(name), degree, 0, dim, std::move(eval), fast);
}

Kernel Kernel::two_sample(std::string name, int degree_x, int degree_y, std::size_t dim, EvalFn eval,
                          FastForm fast) {
    if (degree_y < 1) fail(ErrorKind::parameter, "kernel '" + name + "': two-sample degrees must be >= 1");
    return Kernel(std::move(name), degree_x, degree_y, dim, std::move(eval), fast);
}

void Kernel::check_dim(const Sample& s) const {
    if (dim_ != 0 && s.dim() != dim_) {
        fail(ErrorKind::usage, "kernel '" + name_ + "' needs " + std::to_string(dim_) +
                                   " value column(s), sample '" + s.label() + "' has " +
                                   std::to_string(s.dim()));
    }
}

namespace kernels {

const Kernel& mean() {
    static const Kernel k = Kernel::one_sample("mean", 1, 1, [](std::span<const ObservationView> a) {
        return a[0][0];
    });
    return k;
}

const Kernel& pwm() {
    static const Kernel k = Kernel::one_sample(
        "pwm", 2, 1,
        [](std::span<const ObservationView> a) { return 0.5 * std::max(a[0][0], a[1][0]); },
        FastForm::pair_max_half);
    return k;
}

const Kernel& variance() {
    static const Kernel k = Kernel::one_sample("variance", 2, 1, [](std::span<const ObservationView> a) {
        const double d = a[0][0] - a[1][0];
        return 0.5 * d * d;
    });
    return k;
}

const Kernel& auc() {
    static const Kernel k = Kernel::two_sample(
        "auc", 1, 1, 1,
        [](std::span<const ObservationView> a) { return a[1][0] > a[0][0] ? 1.0 : 0.0; },
        FastForm::cross_less);
    return k;
}

const Kernel& auc_midrank() {
    static const Kernel k = Kernel::two_sample(
        "auc-midrank", 1, 1, 1,
        [](std::span<const ObservationView> a) {
            const double x = a[0][0], y = a[1][0];
            return y > x ? 1.0 : (y == x ? 0.5 : 0.0);
        },
        FastForm::cross_less_midrank);
    return k;
}

const Kernel& auc_diff() {
    static const Kernel k = Kernel::two_sample(
        "auc-diff", 1, 1, 2,
        [](std::span<const ObservationView> a) {
            const ObservationView x = a[0], y = a[1];
            return (x[0] < y[0] ? 1.0 : 0.0) - (x[1] < y[1] ? 1.0 : 0.0);
        },
        FastForm::cross_less_diff);
    return k;
}

std::span<const Kernel* const> builtin() {
    static const std::array<const Kernel*, 6> all{&mean(), &pwm(), &variance(), &auc(), &auc_midrank(),
                                                  &auc_diff()};
    return all;
}

const Kernel& by_name(std::string_view name) {
    for (const Kernel* k : builtin()) {
        if (k->name() == name) return *k;
    }
    fail(ErrorKind::usage, "unknown kernel '" + std::string(name) + "'");
}

}  // namespace kernels

}  // namespace ajel
