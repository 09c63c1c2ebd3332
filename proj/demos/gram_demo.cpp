// Minimal end-to-end walkthrough: encode a random matrix, lose a few
// workers, decode the exact Gram matrix, and print the cost accounting.

#include <iostream>
#include <random>

#include "gramcode/scheme.hpp"

using namespace gramcode;

int main() {
    PrimeField field; // 2^61 - 1
    std::mt19937_64 rng(2024);
    FieldMatrix a = FieldMatrix::random(field, 4, 16, rng);

    ExponentSchemeSpec spec;
    spec.kind = ExponentSchemeSpec::Kind::search;

    RunOptions opts;
    opts.workers = 17;
    opts.drop_count = 3;
    opts.seed = 42;

    auto res = run_sdgmm(a, 4, spec, opts);

    std::cout << "phi:";
    for (auto e : res.instance.phi.exponents) std::cout << ' ' << e;
    std::cout << "\nrecovery threshold: " << res.instance.recovery_threshold << "\n";
    std::cout << "workers: " << res.trace.n_workers << ", dropped: " << res.trace.dropped.size()
              << "\n";
    std::cout << "upload elements: " << res.trace.upload_elems
              << ", download elements: " << res.trace.download_elems << "\n";

    const FieldMatrix expect = a.mul(a.transpose());
    std::cout << "decoded == local A*A^T: " << (res.gram == expect ? "yes" : "NO") << "\n";
    return res.gram == expect ? 0 : 1;
}
