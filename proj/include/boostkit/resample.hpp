#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace boostkit {

enum class ResampleKind { KFold, Bootstrap, Subsampling };

struct ResamplingScheme {
    ResampleKind kind = ResampleKind::Bootstrap;
    int folds = 25;          // K for kfold, B for bootstrap/subsampling
    double fraction = 0.5;   // subsampling train fraction, in (0,1)
    bool stratified = false;
    std::uint64_t seed = 0;

    static ResamplingScheme kfold(int k, std::uint64_t seed, bool stratified = false);
    static ResamplingScheme bootstrap(int b, std::uint64_t seed, bool stratified = false);
    static ResamplingScheme subsampling(int b, double fraction, std::uint64_t seed,
                                        bool stratified = false);

    /// Parses "kfold:10", "bootstrap:25", "subsample:25:0.632".
    static ResamplingScheme parse(const std::string& text, std::uint64_t seed, bool stratified);

    std::string describe() const;
};

struct ResampleSplit {
    std::vector<int> train;  // bootstrap: n draws with replacement (sorted multiset)
    std::vector<int> test;   // out-of-sample indices, sorted
};

/// Generates train/test index pairs for the scheme. Deterministic for a
/// fixed seed. kfold test sets partition {0..n-1} with sizes differing by at
/// most one; bootstrap tests are the out-of-bag rows; stratified variants
/// apply the scheme within each stratum and merge.
std::vector<ResampleSplit> resample_indices(const ResamplingScheme& scheme, int n,
                                            const std::vector<int>* strata = nullptr);

}  // namespace boostkit
