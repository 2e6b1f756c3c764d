#include "boostkit/resample.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "boostkit/common.hpp"
#include "boostkit/rng.hpp"

namespace boostkit {

ResamplingScheme ResamplingScheme::kfold(int k, std::uint64_t seed, bool stratified) {
    ResamplingScheme s;
    s.kind = ResampleKind::KFold;
    s.folds = k;
    s.seed = seed;
    s.stratified = stratified;
    return s;
}

ResamplingScheme ResamplingScheme::bootstrap(int b, std::uint64_t seed, bool stratified) {
    ResamplingScheme s;
    s.kind = ResampleKind::Bootstrap;
    s.folds = b;
    s.seed = seed;
    s.stratified = stratified;
    return s;
}

ResamplingScheme ResamplingScheme::subsampling(int b, double fraction, std::uint64_t seed,
                                               bool stratified) {
    ResamplingScheme s;
    s.kind = ResampleKind::Subsampling;
    s.folds = b;
    s.fraction = fraction;
    s.seed = seed;
    s.stratified = stratified;
    return s;
}

ResamplingScheme ResamplingScheme::parse(const std::string& text, std::uint64_t seed,
                                         bool stratified) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw ArgError("empty resampling scheme");
    try {
        if (parts[0] == "kfold" && parts.size() == 2)
            return kfold(std::stoi(parts[1]), seed, stratified);
        if (parts[0] == "bootstrap" && parts.size() == 2)
            return bootstrap(std::stoi(parts[1]), seed, stratified);
        if (parts[0] == "subsample" && parts.size() == 3)
            return subsampling(std::stoi(parts[1]), std::stod(parts[2]), seed, stratified);
    } catch (const std::exception&) {
        throw ArgError("cannot parse resampling scheme '" + text + "'");
    }
    throw ArgError("unknown resampling scheme '" + text +
                   "' (expected kfold:K, bootstrap:B or subsample:B:fraction)");
}

std::string ResamplingScheme::describe() const {
    std::ostringstream out;
    switch (kind) {
        case ResampleKind::KFold: out << "kfold:" << folds; break;
        case ResampleKind::Bootstrap: out << "bootstrap:" << folds; break;
        case ResampleKind::Subsampling: out << "subsample:" << folds << ":" << fraction; break;
    }
    if (stratified) out << " (stratified)";
    return out.str();
}

namespace {

void validate(const ResamplingScheme& s, int n) {
    if (n < 1) throw DataError("resampling needs at least one observation");
    switch (s.kind) {
        case ResampleKind::KFold:
            if (s.folds < 2) throw ArgError("kfold needs K >= 2");
            if (n < s.folds) throw DataError("n < K in kfold resampling");
            break;
        case ResampleKind::Bootstrap:
            if (s.folds < 1) throw ArgError("bootstrap needs B >= 1");
            break;
        case ResampleKind::Subsampling:
            if (s.folds < 1) throw ArgError("subsampling needs B >= 1");
            if (!(s.fraction > 0.0 && s.fraction < 1.0))
                throw ArgError("subsampling fraction must be in (0,1)");
            break;
    }
}

// One replicate restricted to the ids in `pool`; `rng` is shared across
// replicates so draws chain deterministically.
void add_kfold(std::vector<ResampleSplit>& splits, const std::vector<int>& pool, int k, Rng& rng) {
    std::vector<int> order = pool;
    rng.shuffle(order);
    for (int f = 0; f < k; ++f) {
        for (std::size_t i = f; i < order.size(); i += static_cast<std::size_t>(k))
            splits[f].test.push_back(order[i]);
    }
}

void add_bootstrap(std::vector<ResampleSplit>& splits, const std::vector<int>& pool, int b,
                   Rng& rng) {
    for (int r = 0; r < b; ++r) {
        std::vector<char> drawn(pool.size(), 0);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            std::size_t pick = static_cast<std::size_t>(rng.bounded(pool.size()));
            splits[r].train.push_back(pool[pick]);
            drawn[pick] = 1;
        }
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (!drawn[i]) splits[r].test.push_back(pool[i]);
    }
}

void add_subsampling(std::vector<ResampleSplit>& splits, const std::vector<int>& pool, int b,
                     double fraction, Rng& rng) {
    const auto m = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(fraction * static_cast<double>(pool.size()))));
    for (int r = 0; r < b; ++r) {
        std::vector<int> order = pool;
        rng.shuffle(order);
        for (std::size_t i = 0; i < order.size(); ++i)
            (i < m ? splits[r].train : splits[r].test).push_back(order[i]);
    }
}

}  // namespace

std::vector<ResampleSplit> resample_indices(const ResamplingScheme& scheme, int n,
                                            const std::vector<int>* strata) {
    validate(scheme, n);
    if (strata && static_cast<int>(strata->size()) != n)
        throw DataError("strata length does not match n");

    // Group observation ids per stratum (a single pool if unstratified).
    std::vector<std::vector<int>> pools;
    if (scheme.stratified && strata) {
        std::map<int, std::vector<int>> groups;
        for (int i = 0; i < n; ++i) groups[(*strata)[i]].push_back(i);
        for (auto& [label, ids] : groups) {
            if (ids.empty()) throw DataError("empty stratum");
            pools.push_back(std::move(ids));
        }
    } else {
        pools.emplace_back();
        pools.back().resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pools.back()[static_cast<std::size_t>(i)] = i;
    }

    const int replicates = scheme.folds;
    std::vector<ResampleSplit> splits(static_cast<std::size_t>(replicates));
    Rng rng(scheme.seed);
    for (const auto& pool : pools) {
        switch (scheme.kind) {
            case ResampleKind::KFold:
                if (static_cast<int>(pool.size()) < scheme.folds && scheme.stratified)
                    throw DataError("stratum smaller than K in stratified kfold");
                add_kfold(splits, pool, scheme.folds, rng);
                break;
            case ResampleKind::Bootstrap:
                add_bootstrap(splits, pool, scheme.folds, rng);
                break;
            case ResampleKind::Subsampling:
                add_subsampling(splits, pool, scheme.folds, scheme.fraction, rng);
                break;
        }
    }

    for (auto& s : splits) {
        std::sort(s.test.begin(), s.test.end());
        std::sort(s.train.begin(), s.train.end());
        if (scheme.kind == ResampleKind::KFold) {
            // Train is the complement of the test fold.
            std::vector<char> in_test(static_cast<std::size_t>(n), 0);
            for (int i : s.test) in_test[static_cast<std::size_t>(i)] = 1;
            s.train.clear();
            for (int i = 0; i < n; ++i)
                if (!in_test[static_cast<std::size_t>(i)]) s.train.push_back(i);
        }
    }
    return splits;
}

}  // namespace boostkit
