#include "filtss/dga.hpp"

#include <algorithm>

namespace filtss {

std::string to_string(const Grade& g) {
    return "(" + std::to_string(g.degree) + "," + std::to_string(g.weight) + ")";
}

GradedComplex::GradedComplex(std::uint32_t p, std::map<Grade, std::size_t> dims, std::map<Grade, Matrix> differential)
    : p_(p), dims_(std::move(dims)), d_(std::move(differential)) {
    for (auto it = dims_.begin(); it != dims_.end();) {
        if (it->second == 0) it = dims_.erase(it);
        else ++it;
    }
    for (auto it = d_.begin(); it != d_.end();) {
        const Grade g = it->first;
        const Matrix& m = it->second;
        if (m.cols() != dim(g) || m.rows() != dim(g.below()))
            throw ValidationError("differential out of " + to_string(g) + " has the wrong shape");
        if (m.prime() != p_) throw ValidationError("differential over the wrong prime");
        if (m.rows() == 0 || m.cols() == 0 || m.is_zero()) it = d_.erase(it);
        else ++it;
    }
    for (const auto& [g, m] : d_) {
        auto next = d_.find(g.below());
        if (next == d_.end()) continue;
        if (!(next->second * m).is_zero()) throw ValidationError("d^2 != 0 out of " + to_string(g));
    }
}

std::size_t GradedComplex::dim(const Grade& g) const {
    auto it = dims_.find(g);
    return it == dims_.end() ? 0 : it->second;
}

std::vector<Grade> GradedComplex::grades() const {
    std::vector<Grade> out;
    for (const auto& [g, n] : dims_) out.push_back(g);
    return out;
}

Matrix GradedComplex::d(const Grade& g) const {
    auto it = d_.find(g);
    if (it != d_.end()) return it->second;
    return Matrix(p_, dim(g.below()), dim(g));
}

std::pair<int, int> GradedComplex::degree_bounds() const {
    if (dims_.empty()) return {0, -1};
    int lo = dims_.begin()->first.degree, hi = lo;
    for (const auto& [g, n] : dims_) {
        lo = std::min(lo, g.degree);
        hi = std::max(hi, g.degree);
    }
    return {lo, hi};
}

HomologyGroup::HomologyGroup(Subspace cycles, Subspace boundaries)
    : cycles_(std::move(cycles)), boundaries_(std::move(boundaries)),
      quotient_(boundaries_, quotient_basis(cycles_, boundaries_)) {}

Vector HomologyGroup::coords(std::span<const Scalar> v) const {
    auto c = quotient_.coords(v);
    if (!c) throw std::invalid_argument("homology coordinates requested for a non-cycle");
    return *c;
}

HomologyGroup homology(const GradedComplex& c, const Grade& g) {
    const Subspace z = kernel(c.d(g));
    const Subspace b = image(c.d(g.above()));
    return HomologyGroup(z, b);
}

GradedComplex shift(const GradedComplex& c, int i) {
    std::map<Grade, std::size_t> dims;
    std::map<Grade, Matrix> d;
    const Scalar s = PrimeField(c.prime()).sign(i);
    for (const auto& [g, n] : c.dims()) {
        const Grade h{g.degree + i, g.weight};
        dims[h] = n;
        Matrix m = c.d(g);
        if (s != 1)
            for (std::size_t r = 0; r < m.rows(); ++r) m.scale_row(r, s);
        d.emplace(h, std::move(m));
    }
    return GradedComplex(c.prime(), std::move(dims), std::move(d));
}

Matrix ChainMap::at(const Grade& g) const {
    auto it = components.find(g);
    if (it != components.end()) return it->second;
    return Matrix(source->prime(), target->dim(g), source->dim(g));
}

void check_chain_map(const ChainMap& f) {
    std::vector<Grade> gs = f.source->grades();
    for (const auto& g : f.target->grades()) gs.push_back(g);
    for (const auto& g : gs) {
        const Matrix m = f.at(g);
        if (m.rows() != f.target->dim(g) || m.cols() != f.source->dim(g))
            throw ValidationError("chain map component at " + to_string(g) + " has the wrong shape");
        const Matrix lhs = f.target->d(g) * m;
        const Matrix rhs = f.at(g.below()) * f.source->d(g);
        if (!(lhs == rhs)) throw ValidationError("map does not commute with d at " + to_string(g));
    }
}

GradedComplex mapping_cone(const ChainMap& f) {
    check_chain_map(f);
    const GradedComplex& x = *f.source;
    const GradedComplex& y = *f.target;
    const PrimeField fld(x.prime());
    std::map<Grade, std::size_t> dims;
    for (const auto& [g, n] : x.dims()) dims[g.above()] += n;
    for (const auto& [g, n] : y.dims()) dims[g] += n;
    std::map<Grade, Matrix> d;
    for (const auto& [g, n] : dims) {
        const Grade lo = g.below();
        const std::size_t xs = x.dim(lo), ys = y.dim(g);
        const std::size_t xt = x.dim(lo.below()), yt = y.dim(lo);
        Matrix m(x.prime(), xt + yt, xs + ys);
        const Matrix dx = x.d(lo), dy = y.d(g), fx = f.at(lo);
        for (std::size_t r = 0; r < xt; ++r)
            for (std::size_t c = 0; c < xs; ++c) m.set(r, c, fld.neg(dx.get(r, c)));
        for (std::size_t r = 0; r < yt; ++r) {
            for (std::size_t c = 0; c < xs; ++c) m.set(xt + r, c, fx.get(r, c));
            for (std::size_t c = 0; c < ys; ++c) m.set(xt + r, xs + c, dy.get(r, c));
        }
        d.emplace(g, std::move(m));
    }
    return GradedComplex(x.prime(), std::move(dims), std::move(d));
}

Scalar bar_sign(std::uint32_t p, int degree) { return PrimeField(p).sign(1 + degree); }

namespace {
const std::vector<std::size_t> kEmptyBlock;
}

DGAlgebra::DGAlgebra(std::uint32_t p, std::vector<BasisElement> basis, const std::map<std::size_t, SparseVec>& differential,
                     std::optional<ProductFn> product, std::optional<std::size_t> unit)
    : basis_(std::move(basis)), product_(std::move(product)), unit_(unit) {
    const PrimeField f(p);
    local_.resize(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        auto& blk = blocks_[basis_[i].grade];
        local_[i] = blk.size();
        blk.push_back(i);
        if (!basis_[i].name.empty() && !by_name_.emplace(basis_[i].name, i).second)
            throw ValidationError("duplicate basis element name '" + basis_[i].name + "'");
    }
    std::map<Grade, std::size_t> dims;
    for (const auto& [g, blk] : blocks_) dims[g] = blk.size();
    std::map<Grade, Matrix> d;
    for (const auto& [src, image] : differential) {
        if (src >= basis_.size()) throw ValidationError("differential source out of range");
        const Grade g = basis_[src].grade;
        auto [it, inserted] = d.try_emplace(g, p, dims.count(g.below()) ? dims[g.below()] : 0, dims[g]);
        for (const auto& [tgt, c] : image) {
            if (tgt >= basis_.size()) throw ValidationError("differential target out of range");
            if (basis_[tgt].grade != g.below())
                throw ValidationError("d(" + basis_[src].name + ") has a term of the wrong degree");
            it->second.add_to(local_[tgt], local_[src], f.from_int(c));
        }
    }
    complex_ = GradedComplex(p, std::move(dims), std::move(d));
    if (unit_) {
        if (*unit_ >= basis_.size()) throw ValidationError("unit out of range");
        if (basis_[*unit_].grade != Grade{0, 0}) throw ValidationError("unit must sit in degree 0, weight 0");
    }
    if (product_ && !unit_) throw ValidationError("a multiplicative algebra needs a unit");
}

DGAlgebra DGAlgebra::from_table(std::uint32_t p, std::vector<BasisElement> basis,
                                const std::map<std::size_t, SparseVec>& differential,
                                const std::map<std::pair<std::size_t, std::size_t>, SparseVec>& products,
                                std::size_t unit) {
    auto table = std::make_shared<std::map<std::pair<std::size_t, std::size_t>, SparseVec>>(products);
    ProductFn fn = [table, unit](std::size_t i, std::size_t j) -> SparseVec {
        if (i == unit) return {{j, 1}};
        if (j == unit) return {{i, 1}};
        auto it = table->find({i, j});
        return it == table->end() ? SparseVec{} : it->second;
    };
    for (const auto& [key, val] : products) {
        if (key.first == unit || key.second == unit) {
            const std::size_t other = key.first == unit ? key.second : key.first;
            const bool identity = val.size() == 1 && val[0].first == other && val[0].second % p == 1;
            if (!identity) throw ValidationError("product table contradicts the unit law");
        }
    }
    DGAlgebra a(p, std::move(basis), differential, fn, unit);
    a.validate(SIZE_MAX);
    return a;
}

std::optional<std::size_t> DGAlgebra::find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::size_t DGAlgebra::index(const std::string& name) const {
    auto i = find(name);
    if (!i) throw std::out_of_range("unknown basis element '" + name + "'");
    return *i;
}

const std::vector<std::size_t>& DGAlgebra::block(const Grade& g) const {
    auto it = blocks_.find(g);
    return it == blocks_.end() ? kEmptyBlock : it->second;
}

SparseVec DGAlgebra::multiply_basis(std::size_t i, std::size_t j) const {
    if (!product_) throw std::logic_error("algebra has no product");
    return (*product_)(i, j);
}

SparseVec DGAlgebra::differential_of(std::size_t i) const {
    const Chain c = d(basis_chain(i));
    SparseVec out;
    const auto& blk = block(c.grade);
    for (std::size_t k = 0; k < c.coeffs.size(); ++k)
        if (c.coeffs[k]) out.emplace_back(blk[k], c.coeffs[k]);
    return out;
}

Chain DGAlgebra::basis_chain(std::size_t i) const {
    Chain c = zero_chain(basis_[i].grade);
    c.coeffs[local_[i]] = 1;
    return c;
}

Chain DGAlgebra::zero_chain(const Grade& g) const { return {g, Vector(block_dim(g), 0)}; }

Chain DGAlgebra::d(const Chain& c) const {
    return {c.grade.below(), complex_.d(c.grade).apply(c.coeffs)};
}

Chain DGAlgebra::multiply(const Chain& a, const Chain& b) const {
    const PrimeField f = field();
    Chain out = zero_chain(a.grade + b.grade);
    const auto& ba = block(a.grade);
    const auto& bb = block(b.grade);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (!a.coeffs[i]) continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
            if (!b.coeffs[j]) continue;
            const Scalar c = f.mul(a.coeffs[i], b.coeffs[j]);
            for (const auto& [k, v] : multiply_basis(ba[i], bb[j])) {
                if (basis_[k].grade != out.grade)
                    throw ValidationError("product " + basis_[ba[i]].name + "*" + basis_[bb[j]].name +
                                          " has a term of the wrong degree");
                out.coeffs[local_[k]] = f.add(out.coeffs[local_[k]], f.mul(c, f.from_int(v)));
            }
        }
    }
    return out;
}

Chain DGAlgebra::add(const Chain& a, const Chain& b) const {
    if (a.grade != b.grade) throw std::invalid_argument("adding chains of different grades");
    Chain out = a;
    axpy(field(), out.coeffs, 1, b.coeffs);
    return out;
}

Chain DGAlgebra::scale(const Chain& a, Scalar s) const { return {a.grade, scaled(field(), a.coeffs, s)}; }

void DGAlgebra::validate(std::size_t exhaustive_limit) const {
    if (!product_) return;
    const PrimeField f = field();
    std::vector<std::size_t> sample;
    if (basis_.size() <= exhaustive_limit) {
        for (std::size_t i = 0; i < basis_.size(); ++i) sample.push_back(i);
    } else {
        const std::size_t step = basis_.size() / exhaustive_limit + 1;
        for (std::size_t i = 0; i < basis_.size(); i += step) sample.push_back(i);
    }
    const std::size_t u = *unit_;
    if (!is_zero(d(basis_chain(u)).coeffs)) throw ValidationError("d(unit) != 0");
    for (std::size_t i : sample) {
        const Chain x = basis_chain(i);
        const Chain ux = multiply(basis_chain(u), x), xu = multiply(x, basis_chain(u));
        if (ux.coeffs != x.coeffs || xu.coeffs != x.coeffs)
            throw ValidationError("unit law fails on " + basis_[i].name);
    }
    for (std::size_t i : sample) {
        const Chain x = basis_chain(i);
        const Chain dx = d(x);
        for (std::size_t j : sample) {
            const Chain y = basis_chain(j);
            const Chain xy = multiply(x, y);
            if (basis_[i].grade == Grade{0, 0} && basis_[j].grade == Grade{0, 0}) {
                Scalar exy = 0;
                for (std::size_t k = 0; k < xy.coeffs.size(); ++k)
                    exy = f.add(exy, f.mul(xy.coeffs[k], augmentation(block(xy.grade)[k])));
                if (exy != f.mul(augmentation(i), augmentation(j)))
                    throw ValidationError("augmentation is not multiplicative");
            }
            Chain rhs = multiply(dx, y);
            const Chain second = scale(multiply(x, d(y)), f.sign(basis_[i].grade.degree));
            rhs = add(rhs, second);
            if (d(xy).coeffs != rhs.coeffs)
                throw ValidationError("Leibniz rule fails on (" + basis_[i].name + ", " + basis_[j].name + ")");
        }
    }
    std::vector<std::size_t> triple = sample;
    if (triple.size() > 150) {
        std::vector<std::size_t> t;
        const std::size_t step = triple.size() / 40 + 1;
        for (std::size_t k = 0; k < triple.size(); k += step) t.push_back(triple[k]);
        triple = std::move(t);
    }
    for (std::size_t i : triple)
        for (std::size_t j : triple) {
            const Chain xy = multiply(basis_chain(i), basis_chain(j));
            for (std::size_t k : triple) {
                const Chain z = basis_chain(k);
                const Chain left = multiply(xy, z);
                const Chain right = multiply(basis_chain(i), multiply(basis_chain(j), z));
                if (left.coeffs != right.coeffs)
                    throw ValidationError("associativity fails on (" + basis_[i].name + ", " + basis_[j].name +
                                          ", " + basis_[k].name + ")");
            }
        }
}

HomologyGroup homology(const DGAlgebra& a, const Grade& g) { return homology(a.complex(), g); }

}  // namespace filtss

namespace filtss {

namespace {

bool has_forbidden_suffix(const std::vector<int>& w, const std::vector<std::vector<int>>& forbidden) {
    for (const auto& f : forbidden) {
        if (f.empty() || f.size() > w.size()) continue;
        if (std::equal(f.begin(), f.end(), w.end() - static_cast<std::ptrdiff_t>(f.size()))) return true;
    }
    return false;
}

}  // namespace

WordAlgebra build_word_algebra(const WordAlgebraSpec& spec, std::size_t validation_limit) {
    const PrimeField f(spec.prime);
    const int nletters = static_cast<int>(spec.letters.size());
    for (const auto& l : spec.letters) {
        if (spec.max_weight && l.grade.weight <= 0)
            throw ValidationError("weight truncation needs letters of positive weight");
        if (spec.min_degree && l.grade.degree >= 0)
            throw ValidationError("degree truncation needs letters of negative degree");
    }
    std::vector<std::vector<int>> words{{}};
    std::vector<Grade> grades{{0, 0}};
    std::vector<int> levels{0};
    std::size_t frontier_begin = 0;
    for (std::size_t len = 1; len <= spec.max_length; ++len) {
        const std::size_t frontier_end = words.size();
        for (std::size_t w = frontier_begin; w < frontier_end; ++w) {
            for (int l = 0; l < nletters; ++l) {
                const auto& letter = spec.letters[static_cast<std::size_t>(l)];
                const Grade g = grades[w] + letter.grade;
                if (spec.max_weight && g.weight > *spec.max_weight) continue;
                if (spec.min_degree && g.degree < *spec.min_degree) continue;
                std::vector<int> word = words[w];
                word.push_back(l);
                if (has_forbidden_suffix(word, spec.forbidden)) continue;
                words.push_back(std::move(word));
                grades.push_back(g);
                levels.push_back(levels[w] + letter.level);
            }
        }
        if (frontier_end == words.size()) break;
        frontier_begin = frontier_end;
    }
    auto index = std::make_shared<std::map<std::vector<int>, std::size_t>>();
    std::vector<BasisElement> basis;
    basis.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        (*index)[words[i]] = i;
        std::string name;
        for (std::size_t k = 0; k < words[i].size(); ++k) {
            if (k) name += spec.separator;
            name += spec.letters[static_cast<std::size_t>(words[i][k])].name;
        }
        basis.push_back({words[i].empty() ? "1" : name, grades[i]});
    }
    std::map<std::size_t, SparseVec> diff;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::map<std::size_t, Scalar> acc;
        int prefix_degree = 0;
        const auto& w = words[i];
        for (std::size_t k = 0; k < w.size(); ++k) {
            auto it = spec.differential.find(w[k]);
            if (it != spec.differential.end()) {
                const Scalar s = f.sign(prefix_degree);
                for (const auto& [c, image] : it->second) {
                    std::vector<int> term(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
                    term.insert(term.end(), image.begin(), image.end());
                    term.insert(term.end(), w.begin() + static_cast<std::ptrdiff_t>(k + 1), w.end());
                    auto found = index->find(term);
                    if (found == index->end()) continue;
                    Scalar& slot = acc[found->second];
                    slot = f.add(slot, f.mul(s, c % spec.prime));
                }
            }
            prefix_degree += spec.letters[static_cast<std::size_t>(w[k])].grade.degree;
        }
        SparseVec image;
        for (const auto& [j, c] : acc)
            if (c) image.emplace_back(j, c);
        if (!image.empty()) diff.emplace(i, std::move(image));
    }
    auto word_list = std::make_shared<std::vector<std::vector<int>>>(words);
    DGAlgebra::ProductFn product = [index, word_list](std::size_t a, std::size_t b) -> SparseVec {
        std::vector<int> w = (*word_list)[a];
        const auto& v = (*word_list)[b];
        w.insert(w.end(), v.begin(), v.end());
        auto it = index->find(w);
        if (it == index->end()) return {};
        return {{it->second, 1}};
    };
    DGAlgebra alg(spec.prime, std::move(basis), diff, product, std::size_t{0});
    alg.validate(validation_limit);
    return {std::move(alg), std::move(words), std::move(levels)};
}

}  // namespace filtss
