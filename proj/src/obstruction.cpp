#include "loem/obstruction.hpp"

#include <algorithm>
#include <cstddef>

namespace loem {

namespace {

// Exact maximum clique, Tomita style: candidates greedily colored, scanned
// from the highest color, pruned when |R| + color can no longer win.
class CliqueSolver {
  public:
    CliqueSolver(int m, std::vector<char> adj) : m_(m), adj_(std::move(adj)) {}

    int max_clique_size() {
        best_ = 0;
        std::vector<int> p(m_);
        for (int v = 0; v < m_; ++v) p[v] = v;
        std::vector<int> r;
        expand(r, p);
        return best_;
    }

    // Lexicographically smallest clique of the given size, assuming one exists.
    std::vector<int> lex_smallest(int size) {
        std::vector<int> chosen;
        std::vector<int> cand(m_);
        for (int v = 0; v < m_; ++v) cand[v] = v;
        bool ok = lex_dfs(chosen, cand, size);
        (void)ok;
        return chosen;
    }

  private:
    bool edge(int a, int b) const { return adj_[static_cast<std::size_t>(a) * m_ + b] != 0; }

    void expand(std::vector<int>& r, std::vector<int>& p) {
        if (p.empty()) {
            best_ = std::max(best_, static_cast<int>(r.size()));
            return;
        }
        // Greedy coloring; p reordered by ascending color.
        std::vector<int> color(p.size());
        std::vector<int> ordered;
        ordered.reserve(p.size());
        {
            std::vector<std::vector<int>> buckets;
            for (int v : p) {
                std::size_t c = 0;
                for (; c < buckets.size(); ++c) {
                    bool clash = false;
                    for (int u : buckets[c])
                        if (edge(u, v)) {
                            clash = true;
                            break;
                        }
                    if (!clash) break;
                }
                if (c == buckets.size()) buckets.emplace_back();
                buckets[c].push_back(v);
            }
            for (std::size_t c = 0; c < buckets.size(); ++c)
                for (int v : buckets[c]) {
                    color[ordered.size()] = static_cast<int>(c) + 1;
                    ordered.push_back(v);
                }
        }
        for (int i = static_cast<int>(ordered.size()) - 1; i >= 0; --i) {
            if (static_cast<int>(r.size()) + color[i] <= best_) return;
            int v = ordered[i];
            r.push_back(v);
            std::vector<int> next;
            for (int j = 0; j < i; ++j)
                if (edge(ordered[j], v)) next.push_back(ordered[j]);
            if (next.empty())
                best_ = std::max(best_, static_cast<int>(r.size()));
            else
                expand(r, next);
            r.pop_back();
        }
    }

    bool lex_dfs(std::vector<int>& chosen, const std::vector<int>& cand, int need) {
        if (need == 0) return true;
        for (std::size_t i = 0; i < cand.size(); ++i) {
            if (static_cast<int>(cand.size() - i) < need) return false;
            int v = cand[i];
            std::vector<int> next;
            for (std::size_t j = i + 1; j < cand.size(); ++j)
                if (edge(cand[j], v)) next.push_back(cand[j]);
            if (static_cast<int>(next.size()) >= need - 1) {
                chosen.push_back(v);
                if (lex_dfs(chosen, next, need - 1)) return true;
                chosen.pop_back();
            }
        }
        return false;
    }

    int m_;
    std::vector<char> adj_;
    int best_ = 0;
};

class FlagSearcher {
  public:
    FlagSearcher(const DistanceClassification& cls, std::uint64_t budget)
        : cls_(cls), budget_(budget) {}

    FlagSearchResult run() {
        std::vector<int> all(cls_.point_count());
        for (int i = 0; i < cls_.point_count(); ++i) all[i] = i;
        dfs(all);
        return {FlagCertificate{best_}, exhausted_, nodes_};
    }

  private:
    void dfs(const std::vector<int>& candidates) {
        if (current_.size() > best_.size()) best_ = current_;
        if (exhausted_) return;
        // Each further pair takes two points from the candidate pool.
        std::size_t achievable = current_.size() + candidates.size() / 2;
        if (achievable <= best_.size()) return;
        for (std::size_t a = 0; a < candidates.size() && !exhausted_; ++a) {
            for (std::size_t b = a + 1; b < candidates.size() && !exhausted_; ++b) {
                if (++nodes_ > budget_) {
                    exhausted_ = true;
                    return;
                }
                int p = candidates[a], q = candidates[b];
                std::vector<int> next;
                next.reserve(candidates.size() - 2);
                for (int z : candidates) {
                    if (z == p || z == q) continue;
                    if (cls_.class_of(z, p) == cls_.class_of(z, q)) next.push_back(z);
                }
                current_.emplace_back(p, q);
                dfs(next);
                current_.pop_back();
            }
        }
    }

    const DistanceClassification& cls_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::vector<std::pair<int, int>> current_, best_;
};

}  // namespace

SimplexCertificate max_regular_simplex(const DistanceClassification& classification) {
    const int n = classification.point_count();
    if (n == 1) return SimplexCertificate{{0}, -1};

    int best_size = 0;
    int best_class = -1;
    for (int c = 0; c < classification.num_classes(); ++c) {
        // Compact the class's points into local indices.
        std::vector<int> points;
        for (const PairRef& pr : classification.pairs(c)) {
            points.push_back(pr.i);
            points.push_back(pr.j);
        }
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
        const int m = static_cast<int>(points.size());
        std::vector<char> adj(static_cast<std::size_t>(m) * m, 0);
        auto local = [&](int v) {
            return static_cast<int>(std::lower_bound(points.begin(), points.end(), v) -
                                    points.begin());
        };
        for (const PairRef& pr : classification.pairs(c)) {
            int a = local(pr.i), b = local(pr.j);
            adj[static_cast<std::size_t>(a) * m + b] = 1;
            adj[static_cast<std::size_t>(b) * m + a] = 1;
        }
        CliqueSolver solver(m, adj);
        int size = solver.max_clique_size();
        if (size > best_size) {
            best_size = size;
            best_class = c;
        }
    }

    // Recompute the witness only for the winning class.
    std::vector<int> points;
    for (const PairRef& pr : classification.pairs(best_class)) {
        points.push_back(pr.i);
        points.push_back(pr.j);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const int m = static_cast<int>(points.size());
    std::vector<char> adj(static_cast<std::size_t>(m) * m, 0);
    auto local = [&](int v) {
        return static_cast<int>(std::lower_bound(points.begin(), points.end(), v) -
                                points.begin());
    };
    for (const PairRef& pr : classification.pairs(best_class)) {
        int a = local(pr.i), b = local(pr.j);
        adj[static_cast<std::size_t>(a) * m + b] = 1;
        adj[static_cast<std::size_t>(b) * m + a] = 1;
    }
    CliqueSolver solver(m, adj);
    std::vector<int> witness = solver.lex_smallest(best_size);
    for (int& v : witness) v = points[v];
    return SimplexCertificate{std::move(witness), best_class};
}

FlagSearchResult max_median_flag(const DistanceClassification& classification,
                                 std::uint64_t node_budget) {
    if (classification.point_count() < 2) return {FlagCertificate{}, false, 0};
    FlagSearcher searcher(classification, node_budget);
    return searcher.run();
}

int dimension_lower_bound(const SimplexCertificate& simplex, const FlagCertificate& flag) {
    int k = static_cast<int>(simplex.vertices.size());
    return std::max(k - 1, flag.length());
}

ObstructionReport analyze_obstructions(const DistanceClassification& classification,
                                       std::uint64_t node_budget) {
    ObstructionReport report;
    report.best_simplex = max_regular_simplex(classification);
    FlagSearchResult flag = max_median_flag(classification, node_budget);
    report.best_flag = std::move(flag.flag);
    report.budget_exhausted = flag.budget_exhausted;
    report.dim_lower_bound = dimension_lower_bound(report.best_simplex, report.best_flag);
    return report;
}

bool verify_certificate(const FiniteMetricSpace& space, const SimplexCertificate& cert,
                        double tol_class) {
    for (int v : cert.vertices)
        if (v < 0 || v >= space.size()) throw IndexOutOfRange("vertex " + std::to_string(v));
    if (cert.vertices.empty()) return false;
    std::vector<int> sorted = cert.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    if (cert.vertices.size() == 1) return cert.class_id == -1;

    DistanceClassification cls = classify_distances(space, space.exact() ? 0.0 : tol_class);
    if (cert.class_id < 0 || cert.class_id >= cls.num_classes()) return false;
    for (std::size_t a = 0; a < cert.vertices.size(); ++a)
        for (std::size_t b = a + 1; b < cert.vertices.size(); ++b)
            if (cls.class_of(cert.vertices[a], cert.vertices[b]) != cert.class_id) return false;
    return true;
}

bool verify_certificate(const FiniteMetricSpace& space, const FlagCertificate& cert,
                        double tol_class) {
    for (const auto& [p, q] : cert.pairs)
        if (p < 0 || p >= space.size() || q < 0 || q >= space.size())
            throw IndexOutOfRange("flag point out of range");
    if (cert.pairs.empty()) return true;

    // Distinctness would follow from the equidistance conditions, but checking
    // it first keeps the class lookups below off the diagonal.
    std::vector<int> all;
    for (const auto& [p, q] : cert.pairs) {
        all.push_back(p);
        all.push_back(q);
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) return false;

    DistanceClassification cls = classify_distances(space, space.exact() ? 0.0 : tol_class);
    for (std::size_t i = 1; i < cert.pairs.size(); ++i) {
        for (std::size_t s = 0; s < i; ++s) {
            auto [p, q] = cert.pairs[i];
            auto [ps, qs] = cert.pairs[s];
            if (cls.class_of(p, ps) != cls.class_of(p, qs)) return false;
            if (cls.class_of(q, ps) != cls.class_of(q, qs)) return false;
        }
    }
    return true;
}

}  // namespace loem
