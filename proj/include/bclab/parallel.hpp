#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace bcl {

/// Run fn(i) for i in [0, count) on up to `workers` threads. Work items
/// must be independent; callers keep determinism by writing into
/// preallocated slots.
inline void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int nthreads = std::min<std::size_t>(workers, count);
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

/// out = a * b with the columns of b split across workers. Each output
/// column is produced by exactly one thread, so results do not depend on
/// scheduling.
template <typename DerivedA, typename DerivedB, typename DerivedOut>
void product_by_columns(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                        Eigen::MatrixBase<DerivedOut> const& out_, int workers) {
    auto& out = const_cast<Eigen::MatrixBase<DerivedOut>&>(out_).derived();
    out.derived().resize(a.rows(), b.cols());
    if (workers <= 1 || b.cols() < 2 * workers) {
        out = a * b;
        return;
    }
    const Eigen::Index cols = b.cols();
    const Eigen::Index chunk = (cols + workers - 1) / workers;
    parallel_for(static_cast<std::size_t>((cols + chunk - 1) / chunk), workers,
                 [&](std::size_t blk) {
                     const Eigen::Index c0 = static_cast<Eigen::Index>(blk) * chunk;
                     const Eigen::Index nc = std::min(chunk, cols - c0);
                     out.middleCols(c0, nc) = a * b.middleCols(c0, nc);
                 });
}

}  // namespace bcl
