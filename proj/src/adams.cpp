#include "filtss/adams.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <random>
#include <set>

namespace filtss {

namespace {

using Exps = std::vector<int>;
using Term = std::pair<Exps, Exps>;

void toggle(std::set<Term>& s, Term t) {
    auto [it, inserted] = s.insert(std::move(t));
    if (!inserted) s.erase(it);
}

std::string monomial_name(const Exps& e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        out += "x" + std::to_string(i + 1);
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
    return out.empty() ? "1" : out;
}

}  // namespace

TruncatedDualSteenrod::TruncatedDualSteenrod(int bound, unsigned permutation_seed) : bound_(bound) {
    if (bound < 0) throw RangeError("negative degree bound");
    std::vector<int> gen_deg;
    for (int i = 1; (1 << i) - 1 <= std::max(bound, 1); ++i) gen_deg.push_back((1 << i) - 1);
    const std::size_t n = gen_deg.size();
    auto deg_of = [&](const Exps& e) {
        int d = 0;
        for (std::size_t i = 0; i < n; ++i) d += e[i] * gen_deg[i];
        return d;
    };

    std::vector<Exps> all;
    Exps cur(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int room) {
        if (i == n) {
            all.push_back(cur);
            return;
        }
        for (int e = 0; e * gen_deg[i] <= room; ++e) {
            cur[i] = e;
            rec(i + 1, room - e * gen_deg[i]);
        }
        cur[i] = 0;
    };
    rec(0, bound);
    std::sort(all.begin(), all.end(), [&](const Exps& a, const Exps& b) {
        return std::pair(deg_of(a), a) < std::pair(deg_of(b), b);
    });
    if (permutation_seed) {
        std::mt19937 rng(permutation_seed);
        std::shuffle(all.begin() + 1, all.end(), rng);
    }
    for (const Exps& e : all) {
        index_.emplace(e, exps_.size());
        exps_.push_back(e);
        degree_.push_back(deg_of(e));
        names_.push_back(monomial_name(e));
    }

    // psi(xi_k) = sum_i xi_{k-i}^{2^i} (x) xi_i, extended multiplicatively
    psi_.resize(exps_.size());
    for (std::size_t m = 0; m < exps_.size(); ++m) {
        std::set<Term> terms{{Exps(n, 0), Exps(n, 0)}};
        for (std::size_t k = 1; k <= n; ++k)
            for (int rep = 0; rep < exps_[m][k - 1]; ++rep) {
                std::set<Term> next;
                for (const auto& [l, r] : terms)
                    for (std::size_t i = 0; i <= k; ++i) {
                        Term t{l, r};
                        if (k - i >= 1) t.first[k - i - 1] += 1 << i;
                        if (i >= 1) t.second[i - 1] += 1;
                        toggle(next, std::move(t));
                    }
                terms = std::move(next);
            }
        for (const auto& [l, r] : terms) psi_[m].emplace_back(index_.at(l), index_.at(r));
    }
}

std::optional<std::size_t> TruncatedDualSteenrod::index_of(const std::vector<int>& exps) const {
    Exps e = exps;
    const std::size_t n = exps_.front().size();
    if (e.size() > n) {
        if (std::any_of(e.begin() + static_cast<std::ptrdiff_t>(n), e.end(), [](int v) { return v != 0; }))
            return std::nullopt;
        e.resize(n);
    }
    e.resize(n, 0);
    auto it = index_.find(e);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t TruncatedDualSteenrod::index_of_xi(int i, int power) const {
    Exps e(static_cast<std::size_t>(std::max(i, 1)), 0);
    e[static_cast<std::size_t>(i - 1)] = power;
    auto idx = index_of(e);
    if (!idx) throw RangeError("xi_" + std::to_string(i) + "^" + std::to_string(power) + " exceeds the degree bound");
    return *idx;
}

std::optional<std::size_t> TruncatedDualSteenrod::multiply(std::size_t a, std::size_t b) const {
    Exps e = exps_.at(a);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += exps_.at(b)[i];
    auto it = index_.find(e);
    if (it == index_.end()) {
        overflow_ = true;
        return std::nullopt;
    }
    return it->second;
}

void TruncatedDualSteenrod::check_coassociative() const {
    for (std::size_t m = 0; m < size(); ++m) {
        std::map<std::array<std::size_t, 3>, int> left, right;
        for (const auto& [a, b] : psi_[m]) {
            for (const auto& [c, d] : psi_[a]) left[{c, d, b}] ^= 1;
            for (const auto& [c, d] : psi_[b]) right[{a, c, d}] ^= 1;
        }
        std::erase_if(left, [](const auto& kv) { return kv.second == 0; });
        std::erase_if(right, [](const auto& kv) { return kv.second == 0; });
        if (left != right) throw ValidationError("coproduct is not coassociative on " + names_[m]);
    }
}

void TruncatedDualSteenrod::check_counit() const {
    for (std::size_t m = 0; m < size(); ++m) {
        std::size_t left = 0, right = 0;
        for (const auto& [a, b] : psi_[m]) {
            if (a == unit()) {
                if (b != m) throw ValidationError("counit fails on " + names_[m]);
                ++left;
            }
            if (b == unit()) {
                if (a != m) throw ValidationError("counit fails on " + names_[m]);
                ++right;
            }
        }
        if (left != 1 || right != 1) throw ValidationError("counit fails on " + names_[m]);
    }
}

CobarDGA::CobarDGA(std::shared_ptr<const TruncatedDualSteenrod> coalgebra, int bound)
    : coalg_(std::move(coalgebra)), bound_(bound) {
    const auto& a = *coalg_;
    if (a.bound() < bound) throw RangeError("coalgebra bound below the cobar bound");
    words_ = std::make_shared<std::vector<std::vector<std::size_t>>>();
    lookup_ = std::make_shared<std::map<std::vector<std::size_t>, std::size_t>>();
    auto& words = *words_;
    auto& lookup = *lookup_;

    std::vector<std::size_t> cur;
    std::function<void(int)> rec = [&](int room) {
        lookup.emplace(cur, words.size());
        words.push_back(cur);
        for (std::size_t m = 1; m < a.size(); ++m) {
            if (a.degree(m) > room) continue;
            cur.push_back(m);
            rec(room - a.degree(m));
            cur.pop_back();
        }
    };
    rec(bound);

    std::vector<BasisElement> basis;
    basis.reserve(words.size());
    for (const auto& w : words) {
        std::string name = "[";
        int t = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) name += "|";
            name += a.name(w[i]);
            t += a.degree(w[i]);
        }
        basis.push_back({name + "]", grade(static_cast<int>(w.size()), t)});
    }

    diff_ = std::make_shared<std::map<std::size_t, SparseVec>>();
    for (std::size_t idx = 0; idx < words.size(); ++idx) {
        const auto& w = words[idx];
        std::map<std::size_t, int> acc;
        for (std::size_t i = 0; i < w.size(); ++i)
            for (const auto& [l, r] : a.coproduct(w[i])) {
                if (l == a.unit() || r == a.unit()) continue;
                std::vector<std::size_t> nw(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
                nw.push_back(l);
                nw.push_back(r);
                nw.insert(nw.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
                acc[lookup.at(nw)] ^= 1;
            }
        SparseVec img;
        for (const auto& [j, c] : acc)
            if (c) img.emplace_back(j, 1);
        if (!img.empty()) (*diff_)[idx] = std::move(img);
    }

    auto ws = words_;
    auto lk = lookup_;
    DGAlgebra::ProductFn product = [ws, lk](std::size_t i, std::size_t j) -> SparseVec {
        std::vector<std::size_t> w = (*ws)[i];
        const auto& b = (*ws)[j];
        w.insert(w.end(), b.begin(), b.end());
        auto it = lk->find(w);
        if (it == lk->end()) return {};
        return {{it->second, 1}};
    };
    alg_ = std::make_shared<DGAlgebra>(2, std::move(basis), *diff_, product, std::size_t{0});
}

std::optional<std::size_t> CobarDGA::index_of(const std::vector<std::size_t>& w) const {
    auto it = lookup_->find(w);
    if (it == lookup_->end()) return std::nullopt;
    return it->second;
}

Chain CobarDGA::word_chain(const std::vector<std::vector<int>>& letters) const {
    std::vector<std::size_t> w;
    for (const auto& e : letters) {
        auto m = coalg_->index_of(e);
        if (!m || *m == coalg_->unit()) throw RangeError("letter outside the reduced coalgebra");
        w.push_back(*m);
    }
    auto idx = index_of(w);
    if (!idx) throw RangeError("word exceeds the cobar bound");
    return alg_->basis_chain(*idx);
}

std::map<std::pair<int, int>, std::size_t> CobarDGA::dims() const {
    std::map<std::pair<int, int>, std::size_t> out;
    for (const auto& [g, n] : alg_->complex().dims()) out[{-g.degree, g.weight}] = n;
    return out;
}

void CobarDGA::check_d_squared() const {
    for (const auto& [i, img] : *diff_) {
        std::map<std::size_t, int> acc;
        for (const auto& [j, c] : img) {
            auto it = diff_->find(j);
            if (it == diff_->end()) continue;
            for (const auto& [k, c2] : it->second) acc[k] ^= 1;
        }
        for (const auto& [k, c] : acc)
            if (c) throw ValidationError("d^2 != 0 on " + alg_->element(i).name);
    }
}

CobarDGA build_cobar(int bound, unsigned permutation_seed, CobarLimits limits) {
    if (bound > limits.max_bound)
        throw CapacityError("cobar bound " + std::to_string(bound) + " exceeds the limit " +
                            std::to_string(limits.max_bound));
    if (bound < 1) throw RangeError("cobar bound must be at least 1");
    auto a = std::make_shared<const TruncatedDualSteenrod>(bound, permutation_seed);
    a->check_counit();
    a->check_coassociative();
    CobarDGA c(a, bound);
    c.check_d_squared();
    return c;
}

std::size_t ExtChart::dim(int s, int t) const {
    auto it = dims.find({s, t});
    return it == dims.end() ? 0 : it->second;
}

const NamedClass* ExtChart::find(const std::string& name) const {
    for (const auto& c : named)
        if (c.name == name) return &c;
    return nullptr;
}

Chain h_cycle(const CobarDGA& cobar, int i) {
    std::vector<int> e{1 << i};
    return cobar.word_chain({e});
}

ExtChart ext_chart(const CobarDGA& cobar, ChartRange range, HomologyCache* cache) {
    const DGAlgebra& u = cobar.algebra();
    HomologyCache own(u);
    HomologyCache& hc = cache && &cache->algebra() == &u ? *cache : own;
    const int T = cobar.bound();
    const int s_max = range.s_max < 0 ? T : range.s_max;
    auto in_range = [&](int s, int t) { return s <= s_max && (range.stem_max < 0 || t - s <= range.stem_max); };
    ExtChart chart;
    chart.bound = T;
    for (const auto& [st, n] : cobar.dims()) {
        const auto [s, t] = st;
        if (!in_range(s, t)) continue;
        const std::size_t d = hc.at(CobarDGA::grade(s, t)).dim();
        if (d) chart.dims[st] = d;
    }
    for (int i = 0; (1 << i) <= T; ++i) {
        if (!in_range(1, 1 << i)) continue;
        const Chain h = h_cycle(cobar, i);
        chart.named.push_back({"h" + std::to_string(i), 1, 1 << i, hc.at(h.grade).coords(h.coeffs)});
    }
    if (T >= 11 && in_range(3, 11) && chart.dim(3, 11) == 1) chart.named.push_back({"c0", 3, 11, Vector{1}});
    return chart;
}

C0Verdict verify_c0_bracket(const CobarDGA& cobar, HomologyCache* cache) {
    if (cobar.bound() < 12) throw CapacityError("the c0 bracket needs a cobar bound of at least 12");
    const DGAlgebra& u = cobar.algebra();
    HomologyCache own(u);
    HomologyCache& hc = cache && &cache->algebra() == &u ? *cache : own;
    const Chain h0 = h_cycle(cobar, 0);
    const Chain h1 = h_cycle(cobar, 1);
    const Chain h2 = h_cycle(cobar, 2);
    const Chain h22 = u.multiply(h2, h2);
    C0Verdict v;
    v.h0_h22_zero = is_zero(hc.at(CobarDGA::grade(3, 9)).coords(u.multiply(h0, h22).coeffs));
    v.h22_h1_zero = is_zero(hc.at(CobarDGA::grade(3, 10)).coords(u.multiply(h22, h1).coeffs));
    BracketOptions bo;
    bo.cache = &hc;
    v.bracket = matric_massey(u, {single(h0), single(h22), single(h1)}, bo);
    if (hc.at(CobarDGA::grade(3, 11)).dim() == 1) {
        v.c0 = Vector{1};
        v.contains_c0 = v.bracket.defined && v.bracket.contains(v.c0);
    }
    return v;
}

}  // namespace filtss
