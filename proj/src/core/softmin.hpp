#pragma once

#include "core/transport.hpp"

#include <cstdint>
#include <vector>

namespace illumest::detail {

// Target side of a log-sum-exp reduction
//   out[i] = -eps * log sum_j w_j exp((h_j - |x_i - y_j|^2) / eps)
// Points are stored in Morton order in fixed-size blocks with bounding boxes,
// so blocks that cannot contribute above exp(-kCut) of the row maximum are
// skipped. Results do not depend on the instruction set selected at run time.
class SoftminTarget {
public:
    static constexpr std::size_t kBlock = 64;
    static constexpr double kCut = 50.0;

    explicit SoftminTarget(const WeightedCloud& y);

    std::size_t size() const noexcept { return m_n; }

    // h is indexed like the original cloud; out like x.
    void softmin(const std::vector<CloudPoint>& x, const std::vector<double>& h, double eps,
                 std::vector<double>& out);

private:
    std::size_t m_n = 0;
    std::size_t m_blocks = 0;
    std::vector<std::uint32_t> m_order; // sorted slot -> original index
    std::vector<double> m_u;
    std::vector<double> m_v;
    std::vector<double> m_log_w;
    std::vector<double> m_box; // per block: umin, umax, vmin, vmax

    std::vector<double> m_shifted;
    std::vector<double> m_block_max;
    std::vector<double> m_row;
    std::vector<double> m_bound;
    std::vector<std::uint32_t> m_active;
};

} // namespace illumest::detail
