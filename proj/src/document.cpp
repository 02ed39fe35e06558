#include "filtss/document.hpp"

#include <set>
#include <sstream>

namespace filtss {

using nlohmann::ordered_json;

DocumentError::DocumentError(std::vector<Problem> problems)
    : ValidationError(problems.empty() ? "invalid document" : problems.front().where + ": " + problems.front().what),
      problems_(std::move(problems)) {}

std::string DocumentError::report() const {
    std::ostringstream os;
    for (const auto& p : problems_) os << p.where << ": " << p.what << "\n";
    return os.str();
}

ordered_json parse_json(const std::string& text) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw DocumentError("line " + std::to_string(line) + ":" + std::to_string(col > 1 ? col - 1 : 1),
                              "malformed JSON");
    }
}

namespace {

bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

// Collects problems instead of stopping at the first one.
class Reader {
public:
    std::vector<DocumentError::Problem> problems;

    void fail(const std::string& where, const std::string& what) { problems.push_back({where.empty() ? "/" : where, what}); }

    bool object(const ordered_json& j, const std::string& where, const std::set<std::string>& allowed,
                const std::set<std::string>& required) {
        if (!j.is_object()) {
            fail(where, "expected an object");
            return false;
        }
        for (const auto& [k, v] : j.items())
            if (!allowed.count(k)) fail(where + "/" + k, "unknown field");
        bool ok = true;
        for (const auto& k : required)
            if (!j.contains(k)) {
                fail(where + "/" + k, "missing field");
                ok = false;
            }
        return ok;
    }

    std::optional<long long> integer(const ordered_json& j, const std::string& where) {
        if (!j.is_number_integer()) {
            fail(where, "expected an integer");
            return std::nullopt;
        }
        return j.get<long long>();
    }

    std::optional<std::string> string(const ordered_json& j, const std::string& where) {
        if (!j.is_string()) {
            fail(where, "expected a string");
            return std::nullopt;
        }
        return j.get<std::string>();
    }

    const ordered_json* array(const ordered_json& j, const std::string& key, const std::string& where) {
        if (!j.contains(key)) return nullptr;
        if (!j.at(key).is_array()) {
            fail(where + "/" + key, "expected an array");
            return nullptr;
        }
        return &j.at(key);
    }

    Scalar coeff(const ordered_json& j, const std::string& where, std::uint32_t p) {
        auto v = integer(j, where);
        if (!v) return 0;
        if (*v < 0 || *v >= static_cast<long long>(p)) {
            fail(where, "coefficient must lie in [0, " + std::to_string(p) + ")");
            return 0;
        }
        return static_cast<Scalar>(*v);
    }

    int small(const ordered_json& j, const std::string& where) {
        auto v = integer(j, where);
        if (!v) return 0;
        if (*v < -100000 || *v > 100000) {
            fail(where, "out of range");
            return 0;
        }
        return static_cast<int>(*v);
    }

    std::uint32_t prime(const ordered_json& j, const std::string& where) {
        auto v = integer(j, where);
        if (!v) return 2;
        if (*v > 65521 || !is_prime(*v)) {
            fail(where, "expected a prime below 65536");
            return 2;
        }
        return static_cast<std::uint32_t>(*v);
    }

    void finish() {
        if (!problems.empty()) throw DocumentError(std::move(problems));
    }
};

}  // namespace

AlgebraDocument algebra_from_json(const ordered_json& j) {
    Reader rd;
    AlgebraDocument d;
    if (!rd.object(j, "", {"prime", "generators", "differential", "products", "unit", "metadata"},
                   {"prime", "generators"})) {
        rd.finish();
    }
    d.prime = rd.prime(j.at("prime"), "/prime");
    std::map<std::string, std::size_t> names;
    if (const auto* gens = rd.array(j, "generators", "")) {
        for (std::size_t i = 0; i < gens->size(); ++i) {
            const std::string at = "/generators/" + std::to_string(i);
            const auto& g = (*gens)[i];
            if (!rd.object(g, at, {"name", "n", "t", "weight"}, {"name", "n", "t"})) continue;
            AlgebraDocument::Generator gen;
            if (auto s = rd.string(g.at("name"), at + "/name")) gen.name = *s;
            if (gen.name.empty()) rd.fail(at + "/name", "empty name");
            else if (!names.emplace(gen.name, d.generators.size()).second) rd.fail(at + "/name", "duplicate name '" + gen.name + "'");
            gen.n = rd.small(g.at("n"), at + "/n");
            gen.t = rd.small(g.at("t"), at + "/t");
            if (g.contains("weight")) gen.weight = rd.small(g.at("weight"), at + "/weight");
            d.generators.push_back(std::move(gen));
        }
    }
    auto resolve = [&](const ordered_json& v, const std::string& at) -> std::optional<std::size_t> {
        auto s = rd.string(v, at);
        if (!s) return std::nullopt;
        auto it = names.find(*s);
        if (it == names.end()) {
            rd.fail(at, "unknown generator '" + *s + "'");
            return std::nullopt;
        }
        return it->second;
    };
    auto gen_at = [&](std::size_t i) -> const AlgebraDocument::Generator& { return d.generators[i]; };
    if (const auto* diff = rd.array(j, "differential", "")) {
        std::set<std::pair<std::string, std::string>> seen;
        for (std::size_t i = 0; i < diff->size(); ++i) {
            const std::string at = "/differential/" + std::to_string(i);
            const auto& e = (*diff)[i];
            if (!rd.object(e, at, {"from", "to", "coeff"}, {"from", "to", "coeff"})) continue;
            auto from = resolve(e.at("from"), at + "/from");
            auto to = resolve(e.at("to"), at + "/to");
            const Scalar c = rd.coeff(e.at("coeff"), at + "/coeff", d.prime);
            if (!from || !to) continue;
            const auto &gf = gen_at(*from), &gt = gen_at(*to);
            if (gt.t != gf.t - 1 || gt.weight != gf.weight)
                rd.fail(at, "d must lower t by one and keep the weight");
            if (gt.n < gf.n) rd.fail(at, "d lowers filtration (n of target below n of source)");
            if (!seen.emplace(gf.name, gt.name).second) rd.fail(at, "repeated differential entry");
            d.differential.push_back({gf.name, gt.name, c});
        }
    }
    if (const auto* prods = rd.array(j, "products", "")) {
        std::set<std::pair<std::string, std::string>> seen;
        for (std::size_t i = 0; i < prods->size(); ++i) {
            const std::string at = "/products/" + std::to_string(i);
            const auto& e = (*prods)[i];
            if (!rd.object(e, at, {"left", "right", "result"}, {"left", "right", "result"})) continue;
            auto l = resolve(e.at("left"), at + "/left");
            auto r = resolve(e.at("right"), at + "/right");
            AlgebraDocument::Product pr;
            if (l) pr.left = gen_at(*l).name;
            if (r) pr.right = gen_at(*r).name;
            if (l && r && !seen.emplace(pr.left, pr.right).second) rd.fail(at, "repeated product entry");
            if (!e.at("result").is_array()) {
                rd.fail(at + "/result", "expected an array");
                continue;
            }
            for (std::size_t k = 0; k < e.at("result").size(); ++k) {
                const std::string rat = at + "/result/" + std::to_string(k);
                const auto& term = e.at("result")[k];
                if (!rd.object(term, rat, {"gen", "coeff"}, {"gen", "coeff"})) continue;
                auto g = resolve(term.at("gen"), rat + "/gen");
                const Scalar c = rd.coeff(term.at("coeff"), rat + "/coeff", d.prime);
                if (!g) continue;
                if (l && r) {
                    const auto &gl = gen_at(*l), &gr = gen_at(*r), &gg = gen_at(*g);
                    if (gg.t != gl.t + gr.t || gg.weight != gl.weight + gr.weight)
                        rd.fail(rat, "product term has the wrong grade");
                    if (gg.n < gl.n + gr.n) rd.fail(rat, "product lowers filtration");
                }
                pr.result.push_back({gen_at(*g).name, c});
            }
            d.products.push_back(std::move(pr));
        }
    }
    if (j.contains("unit")) {
        if (auto u = resolve(j.at("unit"), "/unit")) {
            const auto& g = gen_at(*u);
            if (g.t != 0 || g.weight != 0 || g.n != 0) rd.fail("/unit", "the unit must sit at n = 0, t = 0, weight 0");
            d.unit = g.name;
        }
    } else if (!d.products.empty()) {
        rd.fail("/unit", "products need a unit");
    }
    if (j.contains("metadata")) {
        if (!j.at("metadata").is_object()) rd.fail("/metadata", "expected an object");
        else d.metadata = j.at("metadata");
    }
    rd.finish();
    return d;
}

ordered_json to_json(const AlgebraDocument& d) {
    ordered_json j;
    j["prime"] = d.prime;
    j["generators"] = ordered_json::array();
    for (const auto& g : d.generators) {
        ordered_json e{{"name", g.name}, {"n", g.n}, {"t", g.t}};
        if (g.weight) e["weight"] = g.weight;
        j["generators"].push_back(std::move(e));
    }
    j["differential"] = ordered_json::array();
    for (const auto& e : d.differential) j["differential"].push_back({{"from", e.from}, {"to", e.to}, {"coeff", e.coeff}});
    j["products"] = ordered_json::array();
    for (const auto& p : d.products) {
        ordered_json res = ordered_json::array();
        for (const auto& t : p.result) res.push_back({{"gen", t.gen}, {"coeff", t.coeff}});
        j["products"].push_back({{"left", p.left}, {"right", p.right}, {"result", std::move(res)}});
    }
    if (d.unit) j["unit"] = *d.unit;
    if (!d.metadata.empty()) j["metadata"] = d.metadata;
    return j;
}

FilteredDGA to_filtered(const AlgebraDocument& d) {
    const PrimeField f(d.prime);
    std::vector<BasisElement> basis;
    std::vector<int> levels;
    std::map<std::string, std::size_t> index;
    for (const auto& g : d.generators) {
        index.emplace(g.name, basis.size());
        basis.push_back({g.name, {g.t, g.weight}});
        levels.push_back(g.n);
    }
    std::map<std::size_t, SparseVec> diff;
    for (const auto& e : d.differential)
        if (e.coeff % d.prime) diff[index.at(e.from)].emplace_back(index.at(e.to), e.coeff);
    try {
        if (!d.unit) {
            if (!d.products.empty()) throw ValidationError("products need a unit");
            DGAlgebra a(d.prime, std::move(basis), diff, std::nullopt, std::nullopt);
            return FilteredDGA(std::move(a), std::move(levels));
        }
        std::map<std::pair<std::size_t, std::size_t>, SparseVec> table;
        for (const auto& p : d.products) {
            SparseVec v;
            for (const auto& t : p.result)
                if (t.coeff % d.prime) v.emplace_back(index.at(t.gen), t.coeff);
            table[{index.at(p.left), index.at(p.right)}] = std::move(v);
        }
        DGAlgebra a = DGAlgebra::from_table(d.prime, std::move(basis), diff, table, index.at(*d.unit));
        return FilteredDGA(std::move(a), std::move(levels), SIZE_MAX);
    } catch (const DocumentError&) {
        throw;
    } catch (const ValidationError& e) {
        throw DocumentError("/", e.what());
    }
}

AlgebraDocument document_of(const FilteredDGA& x) {
    const DGAlgebra& u = x.algebra();
    AlgebraDocument d;
    d.prime = u.prime();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto& b = u.element(i);
        d.generators.push_back({b.name, x.level(i), b.grade.degree, b.grade.weight});
    }
    for (std::size_t i = 0; i < u.size(); ++i)
        for (const auto& [k, c] : u.differential_of(i))
            if (c) d.differential.push_back({u.element(i).name, u.element(k).name, c});
    if (u.is_multiplicative()) {
        const std::size_t unit = *u.unit();
        d.unit = u.element(unit).name;
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < u.size(); ++j) {
                if (i == unit || j == unit) continue;
                AlgebraDocument::Product p{u.element(i).name, u.element(j).name, {}};
                for (const auto& [k, c] : u.multiply_basis(i, j))
                    if (c) p.result.push_back({u.element(k).name, c});
                if (!p.result.empty()) d.products.push_back(std::move(p));
            }
    }
    return d;
}

AbstractChart chart_from_json(const ordered_json& j) {
    Reader rd;
    AbstractChart c;
    if (!rd.object(j, "", {"prime", "grading", "classes", "differentials", "products", "unit"}, {"classes"})) rd.finish();
    if (j.contains("prime")) c.prime = rd.prime(j.at("prime"), "/prime");
    ChartGrading grading = ChartGrading::s;
    if (j.contains("grading")) {
        auto g = rd.string(j.at("grading"), "/grading");
        if (g == "n") grading = ChartGrading::n;
        else if (g && *g != "s") rd.fail("/grading", "expected \"s\" or \"n\"");
    }
    const char* level_key = grading == ChartGrading::s ? "s" : "n";
    std::set<std::string> names;
    if (const auto* cls = rd.array(j, "classes", "")) {
        for (std::size_t i = 0; i < cls->size(); ++i) {
            const std::string at = "/classes/" + std::to_string(i);
            const auto& e = (*cls)[i];
            if (!rd.object(e, at, {"name", level_key, "t", "weight"}, {"name", level_key, "t"})) continue;
            ChartClass cc;
            if (auto s = rd.string(e.at("name"), at + "/name")) cc.name = *s;
            if (cc.name.empty()) rd.fail(at + "/name", "empty name");
            else if (!names.insert(cc.name).second) rd.fail(at + "/name", "duplicate name '" + cc.name + "'");
            const int lv = rd.small(e.at(level_key), at + "/" + level_key);
            cc.n = grading == ChartGrading::s ? -lv : lv;
            cc.t = rd.small(e.at("t"), at + "/t");
            if (e.contains("weight")) cc.weight = rd.small(e.at("weight"), at + "/weight");
            c.classes.push_back(std::move(cc));
        }
    }
    auto known = [&](const ordered_json& v, const std::string& at) -> std::string {
        auto s = rd.string(v, at);
        if (!s) return {};
        if (!names.count(*s)) rd.fail(at, "unknown class '" + *s + "'");
        return *s;
    };
    if (const auto* ds = rd.array(j, "differentials", "")) {
        for (std::size_t i = 0; i < ds->size(); ++i) {
            const std::string at = "/differentials/" + std::to_string(i);
            const auto& e = (*ds)[i];
            if (!rd.object(e, at, {"page", "from", "to", "coeff"}, {"page", "from", "to"})) continue;
            ChartDifferential cd;
            cd.page = rd.small(e.at("page"), at + "/page");
            if (cd.page < 1) rd.fail(at + "/page", "pages start at 1");
            cd.from = known(e.at("from"), at + "/from");
            cd.to = known(e.at("to"), at + "/to");
            if (e.contains("coeff")) cd.coeff = rd.coeff(e.at("coeff"), at + "/coeff", c.prime);
            c.differentials.push_back(std::move(cd));
        }
    }
    if (const auto* ps = rd.array(j, "products", "")) {
        for (std::size_t i = 0; i < ps->size(); ++i) {
            const std::string at = "/products/" + std::to_string(i);
            const auto& e = (*ps)[i];
            if (!rd.object(e, at, {"left", "right", "result"}, {"left", "right", "result"})) continue;
            ChartProduct cp;
            cp.left = known(e.at("left"), at + "/left");
            cp.right = known(e.at("right"), at + "/right");
            if (!e.at("result").is_array()) {
                rd.fail(at + "/result", "expected an array");
                continue;
            }
            for (std::size_t k = 0; k < e.at("result").size(); ++k) {
                const std::string rat = at + "/result/" + std::to_string(k);
                const auto& t = e.at("result")[k];
                if (!rd.object(t, rat, {"gen", "coeff"}, {"gen", "coeff"})) continue;
                std::string g = known(t.at("gen"), rat + "/gen");
                cp.result.emplace_back(std::move(g), rd.coeff(t.at("coeff"), rat + "/coeff", c.prime));
            }
            c.products.push_back(std::move(cp));
        }
    }
    if (j.contains("unit")) c.unit = known(j.at("unit"), "/unit");
    rd.finish();
    return c;
}

ordered_json to_json(const AbstractChart& c, ChartGrading grading) {
    ordered_json j;
    j["prime"] = c.prime;
    j["grading"] = grading == ChartGrading::s ? "s" : "n";
    j["classes"] = ordered_json::array();
    for (const auto& cl : c.classes) {
        ordered_json e{{"name", cl.name}};
        if (grading == ChartGrading::s) e["s"] = -cl.n;
        else e["n"] = cl.n;
        e["t"] = cl.t;
        if (cl.weight) e["weight"] = cl.weight;
        j["classes"].push_back(std::move(e));
    }
    j["differentials"] = ordered_json::array();
    for (const auto& d : c.differentials)
        j["differentials"].push_back({{"page", d.page}, {"from", d.from}, {"to", d.to}, {"coeff", d.coeff}});
    if (!c.products.empty()) {
        j["products"] = ordered_json::array();
        for (const auto& p : c.products) {
            ordered_json res = ordered_json::array();
            for (const auto& [g, k] : p.result) res.push_back({{"gen", g}, {"coeff", k}});
            j["products"].push_back({{"left", p.left}, {"right", p.right}, {"result", std::move(res)}});
        }
    }
    if (c.unit) j["unit"] = *c.unit;
    return j;
}

bool same_chart(const AbstractChart& a, const AbstractChart& b) {
    if (a.prime != b.prime || a.unit != b.unit || a.classes.size() != b.classes.size() ||
        a.differentials.size() != b.differentials.size() || a.products.size() != b.products.size())
        return false;
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
        const auto &x = a.classes[i], &y = b.classes[i];
        if (x.name != y.name || x.n != y.n || x.t != y.t || x.weight != y.weight) return false;
    }
    for (std::size_t i = 0; i < a.differentials.size(); ++i) {
        const auto &x = a.differentials[i], &y = b.differentials[i];
        if (x.page != y.page || x.from != y.from || x.to != y.to || x.coeff != y.coeff) return false;
    }
    for (std::size_t i = 0; i < a.products.size(); ++i) {
        const auto &x = a.products[i], &y = b.products[i];
        if (x.left != y.left || x.right != y.right || x.result != y.result) return false;
    }
    return true;
}

}  // namespace filtss
