#include "core/softmin.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

namespace illumest::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

typedef double v4d __attribute__((vector_size(32)));
typedef std::int64_t v4i __attribute__((vector_size(32)));

[[gnu::always_inline]] inline v4d load4(const double* p)
{
    v4d x;
    std::memcpy(&x, p, sizeof x);
    return x;
}

[[gnu::always_inline]] inline void store4(double* p, v4d x)
{
    std::memcpy(p, &x, sizeof x);
}

[[gnu::always_inline]] inline v4d splat(double x)
{
    return v4d{x, x, x, x};
}

// exp(x) for x <= 0, relative error below 1e-15; inputs under -708 give 0.
[[gnu::always_inline]] inline v4d exp4(v4d x)
{
    const v4d lo = splat(-708.0);
    const v4d xc = x < lo ? lo : x;
    const double magic = 0x1.8p52;
    const v4d t = xc * 1.4426950408889634 + magic;
    const v4i bits = reinterpret_cast<v4i>(t);
    const v4d n = t - magic;
    v4d r = xc - n * 6.93147180369123816490e-01;
    r = r - n * 1.90821492927058770002e-10;
    v4d p = r * (1.0 / 479001600.0) + 1.0 / 39916800.0;
    p = p * r + 1.0 / 3628800.0;
    p = p * r + 1.0 / 362880.0;
    p = p * r + 1.0 / 40320.0;
    p = p * r + 1.0 / 5040.0;
    p = p * r + 1.0 / 720.0;
    p = p * r + 1.0 / 120.0;
    p = p * r + 1.0 / 24.0;
    p = p * r + 1.0 / 6.0;
    p = p * r + 0.5;
    p = p * r + 1.0;
    p = p * r + 1.0;
    const v4d scale = reinterpret_cast<v4d>((bits + 1023) << 52);
    return x < lo ? splat(0.0) : p * scale;
}

struct RowArgs {
    double xu;
    double xv;
    double inv_eps;
    const double* u;
    const double* v;
    const double* shifted;
    const std::uint32_t* blocks;
    std::size_t n_blocks;
    double* row;
};

// Maximum of the exponents over the listed blocks; exponents go to row.
__attribute__((target_clones("avx2", "default")))
double row_exponents(const RowArgs& a)
{
    constexpr std::size_t B = SoftminTarget::kBlock;
    const v4d xu = splat(a.xu);
    const v4d xv = splat(a.xv);
    const v4d ie = splat(a.inv_eps);
    v4d vmax = splat(-kInf);
    for (std::size_t k = 0; k < a.n_blocks; ++k) {
        const std::size_t base = static_cast<std::size_t>(a.blocks[k]) * B;
        for (std::size_t j = base; j < base + B; j += 4) {
            const v4d du = xu - load4(a.u + j);
            const v4d dv = xv - load4(a.v + j);
            const v4d s = load4(a.shifted + j) - (du * du + dv * dv) * ie;
            store4(a.row + j, s);
            vmax = s > vmax ? s : vmax;
        }
    }
    return std::max(std::max(vmax[0], vmax[1]), std::max(vmax[2], vmax[3]));
}

// sum exp(row - mx) over the listed blocks.
__attribute__((target_clones("avx2", "default")))
double row_expsum(const RowArgs& a, double mx)
{
    constexpr std::size_t B = SoftminTarget::kBlock;
    const v4d m = splat(mx);
    v4d acc = splat(0.0);
    for (std::size_t k = 0; k < a.n_blocks; ++k) {
        const std::size_t base = static_cast<std::size_t>(a.blocks[k]) * B;
        for (std::size_t j = base; j < base + B; j += 4)
            acc += exp4(load4(a.row + j) - m);
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

std::uint64_t spread_bits(std::uint32_t x)
{
    std::uint64_t v = x;
    v = (v | (v << 16)) & 0x0000FFFF0000FFFFULL;
    v = (v | (v << 8)) & 0x00FF00FF00FF00FFULL;
    v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0FULL;
    v = (v | (v << 2)) & 0x3333333333333333ULL;
    v = (v | (v << 1)) & 0x5555555555555555ULL;
    return v;
}

} // namespace

SoftminTarget::SoftminTarget(const WeightedCloud& y) : m_n(y.size())
{
    const auto& pts = y.points();
    double umin = kInf, umax = -kInf, vmin = kInf, vmax = -kInf;
    for (const CloudPoint& p : pts) {
        umin = std::min(umin, p.u);
        umax = std::max(umax, p.u);
        vmin = std::min(vmin, p.v);
        vmax = std::max(vmax, p.v);
    }
    const double su = umax > umin ? 65535.0 / (umax - umin) : 0.0;
    const double sv = vmax > vmin ? 65535.0 / (vmax - vmin) : 0.0;
    std::vector<std::uint64_t> code(m_n);
    for (std::size_t i = 0; i < m_n; ++i) {
        const auto qu = static_cast<std::uint32_t>((pts[i].u - umin) * su);
        const auto qv = static_cast<std::uint32_t>((pts[i].v - vmin) * sv);
        code[i] = spread_bits(qu) | (spread_bits(qv) << 1);
    }
    m_order.resize(m_n);
    std::iota(m_order.begin(), m_order.end(), 0u);
    std::stable_sort(m_order.begin(), m_order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return code[a] < code[b]; });

    m_blocks = (m_n + kBlock - 1) / kBlock;
    const std::size_t padded = m_blocks * kBlock;
    m_u.assign(padded, 0.0);
    m_v.assign(padded, 0.0);
    m_log_w.assign(padded, -kInf);
    for (std::size_t s = 0; s < m_n; ++s) {
        const std::size_t i = m_order[s];
        m_u[s] = pts[i].u;
        m_v[s] = pts[i].v;
        const double w = y.weights()[i];
        m_log_w[s] = w > 0.0 ? std::log(w) : -kInf;
    }
    m_box.resize(4 * m_blocks);
    for (std::size_t b = 0; b < m_blocks; ++b) {
        const std::size_t end = std::min(m_n, (b + 1) * kBlock);
        double bu0 = kInf, bu1 = -kInf, bv0 = kInf, bv1 = -kInf;
        for (std::size_t s = b * kBlock; s < end; ++s) {
            bu0 = std::min(bu0, m_u[s]);
            bu1 = std::max(bu1, m_u[s]);
            bv0 = std::min(bv0, m_v[s]);
            bv1 = std::max(bv1, m_v[s]);
        }
        m_box[4 * b] = bu0;
        m_box[4 * b + 1] = bu1;
        m_box[4 * b + 2] = bv0;
        m_box[4 * b + 3] = bv1;
    }
    m_shifted.assign(padded, -kInf);
    m_block_max.resize(m_blocks);
    m_row.resize(padded);
    m_bound.resize(m_blocks);
    m_active.reserve(m_blocks);
}

void SoftminTarget::softmin(const std::vector<CloudPoint>& x, const std::vector<double>& h,
                            double eps, std::vector<double>& out)
{
    const double inv_eps = 1.0 / eps;
    for (std::size_t s = 0; s < m_n; ++s)
        m_shifted[s] = m_log_w[s] + h[m_order[s]] * inv_eps;
    for (std::size_t b = 0; b < m_blocks; ++b) {
        const std::size_t end = std::min(m_n, (b + 1) * kBlock);
        double mx = -kInf;
        for (std::size_t s = b * kBlock; s < end; ++s)
            mx = std::max(mx, m_shifted[s]);
        m_block_max[b] = mx;
    }

    RowArgs args{0.0, 0.0, inv_eps, m_u.data(), m_v.data(), m_shifted.data(),
                 nullptr, 0, m_row.data()};
    out.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        args.xu = x[i].u;
        args.xv = x[i].v;

        std::uint32_t best = 0;
        for (std::size_t b = 0; b < m_blocks; ++b) {
            const double* box = &m_box[4 * b];
            const double du = std::max({box[0] - args.xu, args.xu - box[1], 0.0});
            const double dv = std::max({box[2] - args.xv, args.xv - box[3], 0.0});
            m_bound[b] = m_block_max[b] - (du * du + dv * dv) * inv_eps;
            if (m_bound[b] > m_bound[best])
                best = static_cast<std::uint32_t>(b);
        }

        args.blocks = &best;
        args.n_blocks = 1;
        const double floor = row_exponents(args) - kCut;

        m_active.clear();
        for (std::size_t b = 0; b < m_blocks; ++b)
            if (m_bound[b] >= floor)
                m_active.push_back(static_cast<std::uint32_t>(b));
        args.blocks = m_active.data();
        args.n_blocks = m_active.size();
        const double mx = row_exponents(args);
        out[i] = -eps * (mx + std::log(row_expsum(args, mx)));
    }
}

} // namespace illumest::detail
