#include "cli.hpp"

#include "filtss/adams.hpp"
#include "filtss/generation.hpp"
#include "filtss/koszul.hpp"
#include "filtss/massey.hpp"
#include "filtss/moss.hpp"
#include "filtss/sseq.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace filtss::cli {

using nlohmann::ordered_json;

namespace {

class ResolutionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A computation that ran out of budget; carries the partial report.
struct Exhausted {
    ordered_json report;
};

std::string read_input(const std::string& path) {
    std::ostringstream os;
    if (path == "-") {
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw DocumentError(path, "cannot open file");
    os << in.rdbuf();
    return os.str();
}

AlgebraDocument load_algebra(const std::string& path) { return algebra_from_json(parse_json(read_input(path))); }

ordered_json grade_json(const Grade& g) { return ordered_json::array({g.degree, g.weight}); }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

int parse_int(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw ResolutionError("bad number '" + s + "' in " + what);
    return v;
}

// ---------------------------------------------------------------- named chains

// Names resolve to basis elements, or for the cobar to h_i; '*' multiplies, '^' powers,
// integers scale, "0@d,w" is zero at a grade (default 0,0).
class Namer {
public:
    Namer(const DGAlgebra& u, const CobarDGA* cobar) : u_(&u), cobar_(cobar) {}

    Chain chain(const std::string& expr) const {
        if (expr.empty()) throw ResolutionError("empty bracket entry");
        if (auto i = u_->find(expr)) return u_->basis_chain(*i);
        if (expr[0] == '0' && (expr.size() == 1 || expr[1] == '@')) {
            Grade g{0, 0};
            if (expr.size() > 1) {
                auto parts = split(expr.substr(2), ',');
                if (parts.size() != 2) throw ResolutionError("zero entry needs '0@degree,weight': " + expr);
                g = {parse_int(parts[0], expr), parse_int(parts[1], expr)};
            }
            return u_->zero_chain(g);
        }
        std::optional<Chain> acc;
        Scalar scale = 1;
        const PrimeField f = u_->field();
        for (const auto& factor : split(expr, '*')) {
            if (!factor.empty() && std::all_of(factor.begin(), factor.end(), ::isdigit)) {
                scale = f.mul(scale, f.from_int(parse_int(factor, expr)));
                continue;
            }
            std::string name = factor;
            int power = 1;
            if (auto caret = factor.rfind('^'); caret != std::string::npos && !leaf(factor)) {
                name = factor.substr(0, caret);
                power = parse_int(factor.substr(caret + 1), expr);
                if (power < 1) throw ResolutionError("powers start at 1: " + expr);
            }
            const Chain base = leaf_chain(name);
            for (int i = 0; i < power; ++i) acc = acc ? u_->multiply(*acc, base) : base;
        }
        if (!acc) throw ResolutionError("bracket entry has no class: " + expr);
        return u_->scale(*acc, scale);
    }

private:
    bool leaf(const std::string& name) const { return u_->find(name).has_value(); }

    Chain leaf_chain(const std::string& name) const {
        if (auto i = u_->find(name)) return u_->basis_chain(*i);
        if (cobar_ && name.size() >= 2 && name[0] == 'h' &&
            std::all_of(name.begin() + 1, name.end(), ::isdigit)) {
            const int i = parse_int(name.substr(1), name);
            if (i < 0 || (1 << std::min(i, 30)) > cobar_->bound())
                throw ResolutionError("h" + std::to_string(i) + " lies beyond the cobar bound");
            return h_cycle(*cobar_, i);
        }
        throw ResolutionError("unknown name '" + name + "'");
    }

    const DGAlgebra* u_;
    const CobarDGA* cobar_;
};

ordered_json chain_json(const DGAlgebra& u, const Chain& c) {
    ordered_json out = ordered_json::array();
    const auto& block = u.block(c.grade);
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
        if (c.coeffs[i]) out.push_back({{"gen", u.element(block[i]).name}, {"coeff", c.coeffs[i]}});
    return out;
}

// ---------------------------------------------------------------- pages

struct PagesOptions {
    int max_page = 0;
    ChartGrading grading = ChartGrading::s;
    std::string format = "tsv";
};

struct CellSummary {
    std::size_t dim = 0;
    std::map<std::pair<int, int>, std::size_t> out;  // (n', t') -> rank
};

using PageSummary = std::map<std::pair<int, int>, CellSummary>;  // (n, t), weights summed

std::vector<std::pair<int, PageSummary>> summarize(const SpectralSequence& ss, int max_page) {
    std::vector<std::pair<int, PageSummary>> pages;
    for (int r = 1; r <= max_page; ++r) {
        const Page p = ss.page(r);
        PageSummary sum;
        for (const auto& [k, cell] : p.cells)
            if (cell->dim()) sum[{k.n, k.t()}].dim += cell->dim();
        for (const auto& [k, m] : p.differentials) {
            const std::size_t rk = rank(m);
            if (rk) sum[{k.n, k.t()}].out[{k.n + r, k.t() - 1}] += rk;
        }
        pages.emplace_back(r, std::move(sum));
    }
    return pages;
}

int shown(ChartGrading g, int n) { return g == ChartGrading::s ? -n : n; }

std::string pages_tsv(const std::vector<std::pair<int, PageSummary>>& pages, ChartGrading g) {
    std::ostringstream os;
    const bool s = g == ChartGrading::s;
    os << "page\t" << (s ? "s" : "n") << "\tt\t" << (s ? "t-s" : "t+n") << "\tdim\tdifferentials\n";
    for (const auto& [r, sum] : pages)
        for (const auto& [nt, c] : sum) {
            if (!c.dim) continue;
            const auto [n, t] = nt;
            os << r << '\t' << shown(g, n) << '\t' << t << '\t' << t + n << '\t' << c.dim << '\t';
            bool first = true;
            for (const auto& [to, rk] : c.out) {
                if (!first) os << ',';
                first = false;
                os << '(' << shown(g, n) << ',' << t << ")->(" << shown(g, to.first) << ',' << to.second << "):" << rk;
            }
            os << '\n';
        }
    return os.str();
}

ordered_json pages_json(const SpectralSequence& ss, int max_page, ChartGrading g) {
    const char* lv = g == ChartGrading::s ? "s" : "n";
    ordered_json out;
    out["grading"] = lv;
    out["max_page"] = max_page;
    out["stabilization_page"] = ss.stabilization_page();
    out["pages"] = ordered_json::array();
    for (int r = 1; r <= max_page; ++r) {
        const Page p = ss.page(r);
        ordered_json page{{"page", r}, {"label", "E_" + std::to_string(r) + " from Ctau^" + std::to_string(r) +
                                                      "-quotient homology"}};
        page["cells"] = ordered_json::array();
        for (const auto& [k, cell] : p.cells)
            if (cell->dim())
                page["cells"].push_back({{lv, shown(g, k.n)}, {"t", k.t()}, {"weight", k.g.weight}, {"dim", cell->dim()}});
        page["differentials"] = ordered_json::array();
        for (const auto& [k, m] : p.differentials)
            if (const std::size_t rk = rank(m))
                page["differentials"].push_back({{"from", {{lv, shown(g, k.n)}, {"t", k.t()}, {"weight", k.g.weight}}},
                                                 {"to", {{lv, shown(g, k.n + r)}, {"t", k.t() - 1}, {"weight", k.g.weight}}},
                                                 {"rank", rk}});
        out["pages"].push_back(std::move(page));
    }
    return out;
}

// one panel per page on (t - s, s) axes
std::string pages_svg(const std::vector<std::pair<int, PageSummary>>& pages, ChartGrading g) {
    int xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool any = false;
    for (const auto& [r, sum] : pages)
        for (const auto& [nt, c] : sum) {
            const int x = nt.second + nt.first, y = shown(g, nt.first);
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            }
            xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            ymin = std::min(ymin, y), ymax = std::max(ymax, y);
            for (const auto& [to, rk] : c.out) {
                const int x2 = to.second + to.first, y2 = shown(g, to.first);
                xmin = std::min(xmin, x2), xmax = std::max(xmax, x2);
                ymin = std::min(ymin, y2), ymax = std::max(ymax, y2);
            }
        }
    const int cell = 40, margin = 40, title = 24;
    const int pw = (xmax - xmin + 1) * cell + 2 * margin;
    const int ph = (ymax - ymin + 1) * cell + 2 * margin + title;
    const int height = ph * static_cast<int>(std::max<std::size_t>(pages.size(), 1));
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pw << "\" height=\"" << height
       << "\" font-family=\"monospace\" font-size=\"11\">\n";
    const char* ylab = g == ChartGrading::s ? "s" : "n";
    for (std::size_t pi = 0; pi < pages.size(); ++pi) {
        const auto& [r, sum] = pages[pi];
        const int top = static_cast<int>(pi) * ph;
        auto px = [&](int x) { return margin + (x - xmin) * cell + cell / 2; };
        auto py = [&](int y) { return top + title + margin + (ymax - y) * cell + cell / 2; };
        os << "<g id=\"page" << r << "\">\n";
        os << "<text x=\"" << margin << "\" y=\"" << top + 16 << "\">E_" << r << " (Ctau^" << r
           << "-quotient homology), x = t-" << ylab << ", y = " << ylab << "</text>\n";
        for (int x = xmin; x <= xmax; ++x)
            os << "<text x=\"" << px(x) - 3 << "\" y=\"" << py(ymin) + cell / 2 + 14 << "\">" << x << "</text>\n";
        for (int y = ymin; y <= ymax; ++y)
            os << "<text x=\"" << margin - 24 << "\" y=\"" << py(y) + 4 << "\">" << y << "</text>\n";
        os << "<rect x=\"" << margin << "\" y=\"" << top + title + margin << "\" width=\"" << pw - 2 * margin
           << "\" height=\"" << ph - 2 * margin - title << "\" fill=\"none\" stroke=\"#bbb\"/>\n";
        for (const auto& [nt, c] : sum) {
            const int x = nt.second + nt.first, y = shown(g, nt.first);
            for (const auto& [to, rk] : c.out)
                os << "<line x1=\"" << px(x) << "\" y1=\"" << py(y) << "\" x2=\"" << px(to.second + to.first)
                   << "\" y2=\"" << py(shown(g, to.first)) << "\" stroke=\"#c33\" stroke-width=\"" << rk
                   << "\"><title>d_" << r << " rank " << rk << "</title></line>\n";
            for (std::size_t k = 0; k < c.dim; ++k) {
                const int off = static_cast<int>(k) * 7 - static_cast<int>(c.dim - 1) * 7 / 2;
                os << "<circle cx=\"" << px(x) + off << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"black\"/>\n";
            }
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

int cmd_pages(const std::string& path, const PagesOptions& opt, std::ostream& out) {
    const FilteredDGA x = to_filtered(load_algebra(path));
    const SpectralSequence ss(x);
    const int max_page = opt.max_page > 0 ? opt.max_page : ss.stabilization_page();
    if (opt.format == "json") {
        out << pages_json(ss, max_page, opt.grading).dump(2) << '\n';
        return ok;
    }
    const auto pages = summarize(ss, max_page);
    out << (opt.format == "svg" ? pages_svg(pages, opt.grading) : pages_tsv(pages, opt.grading));
    return ok;
}

// ---------------------------------------------------------------- massey

struct MasseyOptions {
    std::string bracket;
    std::string spec_path;
    int cobar_bound = 0;
    std::size_t budget = 0;
};

std::vector<std::vector<std::vector<std::string>>> bracket_entries(const MasseyOptions& opt) {
    std::vector<std::vector<std::vector<std::string>>> mats;
    if (!opt.spec_path.empty()) {
        const ordered_json j = parse_json(read_input(opt.spec_path));
        std::vector<DocumentError::Problem> problems;
        if (!j.is_object() || !j.contains("matrices") || !j.at("matrices").is_array()) {
            throw DocumentError("/matrices", "expected an object with a \"matrices\" array");
        }
        for (const auto& [k, v] : j.items())
            if (k != "matrices") problems.push_back({"/" + k, "unknown field"});
        const auto& ms = j.at("matrices");
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::string at = "/matrices/" + std::to_string(i);
            std::vector<std::vector<std::string>> rows;
            if (!ms[i].is_array() || ms[i].empty()) {
                problems.push_back({at, "expected a non-empty array of rows"});
                continue;
            }
            for (std::size_t r = 0; r < ms[i].size(); ++r) {
                const auto& row = ms[i][r];
                std::vector<std::string> cells;
                if (!row.is_array() || row.empty()) {
                    problems.push_back({at + "/" + std::to_string(r), "expected a non-empty array of entries"});
                    continue;
                }
                for (std::size_t c = 0; c < row.size(); ++c) {
                    if (!row[c].is_string()) {
                        problems.push_back({at + "/" + std::to_string(r) + "/" + std::to_string(c), "expected a string"});
                        continue;
                    }
                    cells.push_back(row[c].get<std::string>());
                }
                if (!rows.empty() && cells.size() != rows.front().size())
                    problems.push_back({at + "/" + std::to_string(r), "ragged matrix"});
                rows.push_back(std::move(cells));
            }
            mats.push_back(std::move(rows));
        }
        if (!problems.empty()) throw DocumentError(std::move(problems));
    } else {
        for (const auto& e : split(opt.bracket, ';')) mats.push_back({{e}});
    }
    if (mats.size() < 3) throw ResolutionError("a bracket needs at least three entries");
    return mats;
}

int cmd_massey(const std::string& path, const MasseyOptions& opt, std::ostream& out) {
    std::optional<CobarDGA> cobar;
    std::optional<FilteredDGA> x;
    if (opt.cobar_bound > 0) cobar.emplace(build_cobar(opt.cobar_bound));
    else x.emplace(to_filtered(load_algebra(path)));
    const DGAlgebra& u = cobar ? cobar->algebra() : x->algebra();
    if (!u.is_multiplicative()) throw DocumentError("/products", "a bracket needs a multiplicative document");
    const Namer namer(u, cobar ? &*cobar : nullptr);

    const auto names = bracket_entries(opt);
    std::vector<ChainMatrix> mats;
    ordered_json shape = ordered_json::array();
    for (const auto& rows : names) {
        ChainMatrix m;
        m.rows = rows.size();
        m.cols = rows.front().size();
        for (const auto& row : rows)
            for (const auto& e : row) m.entries.push_back(namer.chain(e));
        mats.push_back(std::move(m));
        shape.push_back(rows);
    }
    HomologyCache cache(u);
    BracketOptions bo;
    bo.budget = opt.budget;
    bo.cache = &cache;
    const BracketResult res = matric_massey(u, mats, bo);

    ordered_json rep;
    rep["source"] = cobar ? ordered_json{{"cobar_bound", opt.cobar_bound}} : ordered_json{{"document", path}};
    rep["prime"] = u.prime();
    rep["bracket"] = shape;
    rep["budget"] = opt.budget;
    rep["defined"] = res.defined;
    rep["exhaustive"] = res.exhaustive;
    rep["systems"] = res.systems;
    rep["rows"] = res.rows;
    rep["cols"] = res.cols;
    rep["entry_grades"] = ordered_json::array();
    for (const auto& g : res.entry_grades) rep["entry_grades"].push_back(grade_json(g));
    rep["indeterminacy_dim"] = res.defined ? res.indeterminacy.dim() : 0;
    rep["values"] = ordered_json::array();
    std::vector<NamedClass> named;
    if (cobar && res.defined && res.entry_grades.size() == 1) {
        const Grade g = res.entry_grades.front();
        const int s = -g.degree, t = g.weight;
        named = ext_chart(*cobar, {s, t - s}, &cache).named;
    }
    if (res.defined) {
        rep["contains_zero"] = res.contains_zero();
        const auto vals = res.values(4096);
        rep["values_listed"] = vals.has_value();
        if (vals)
            for (const Vector& v : *vals) {
                ordered_json val{{"coords", v}};
                ordered_json entries = ordered_json::array();
                std::size_t off = 0;
                for (std::size_t e = 0; e < res.entry_grades.size(); ++e) {
                    const Grade g = res.entry_grades[e];
                    const HomologyGroup& h = cache.at(g);
                    const Vector part(v.begin() + static_cast<std::ptrdiff_t>(off),
                                      v.begin() + static_cast<std::ptrdiff_t>(off + res.entry_dims[e]));
                    off += res.entry_dims[e];
                    Chain rep_chain = u.zero_chain(g);
                    for (std::size_t i = 0; i < part.size(); ++i)
                        if (part[i]) axpy(u.field(), rep_chain.coeffs, part[i], h.reps()[i]);
                    entries.push_back({{"grade", grade_json(g)}, {"representative", chain_json(u, rep_chain)}});
                }
                val["entries"] = std::move(entries);
                ordered_json names_here = ordered_json::array();
                for (const auto& nc : named)
                    if (CobarDGA::grade(nc.s, nc.t) == res.entry_grades.front() && nc.coords == v)
                        names_here.push_back(nc.name);
                if (cobar) val["named"] = std::move(names_here);
                rep["values"].push_back(std::move(val));
            }
    }
    if (!res.exhaustive) throw Exhausted{rep};
    out << rep.dump(2) << '\n';
    return res.defined ? ok : negative;
}

// ---------------------------------------------------------------- realize

int cmd_realize(const std::string& path, std::ostream& out) {
    const AbstractChart chart = chart_from_json(parse_json(read_input(path)));
    const FilteredDGA x = realize_ss(chart);
    AlgebraDocument d = document_of(x);
    d.metadata["realized_from"] = path;
    out << to_json(d).dump(2) << '\n';
    return ok;
}

// ---------------------------------------------------------------- koszul

struct KoszulOptions {
    std::string mode = "classical";
    BarBounds bounds;
};

ordered_json tor_cells(const std::vector<TorCell>& cells) {
    ordered_json out = ordered_json::array();
    for (const auto& c : cells) out.push_back({{"s", c.s}, {"grade", grade_json(c.g)}, {"dim", c.dim}});
    return out;
}

int cmd_koszul(const std::string& path, const KoszulOptions& opt, std::ostream& out) {
    const FilteredDGA x = to_filtered(load_algebra(path));
    const DGAlgebra& u = x.algebra();
    if (!u.is_multiplicative()) throw DocumentError("/products", "Koszulity needs a multiplicative document");
    KoszulReport rep;
    if (opt.mode == "classical") rep = is_koszul_classical(underlying_graded(u), opt.bounds);
    else rep = is_koszul_derived(u, opt.bounds);
    ordered_json j;
    j["document"] = path;
    j["mode"] = opt.mode;
    j["bounds"] = {{"s_max", opt.bounds.s_max}, {"weight_max", opt.bounds.weight_max}};
    j["koszul"] = rep.koszul;
    j["offending"] = tor_cells(rep.offending);
    j["nonzero"] = tor_cells(rep.nonzero);
    out << j.dump(2) << '\n';
    return rep.koszul ? ok : negative;
}

// ---------------------------------------------------------------- generators

struct GeneratorsOptions {
    int r = 2;
    GenerationWindow window;
    std::size_t budget = 0;
};

int cmd_generators(const std::string& path, const GeneratorsOptions& opt, std::ostream& out) {
    const FilteredDGA x = to_filtered(load_algebra(path));
    if (!x.is_multiplicative()) throw DocumentError("/products", "generation needs a multiplicative document");
    const SpectralSequence ss(x);
    GenerationOptions go;
    go.systems_budget = opt.budget;
    const GenerationVerdict v = generation_verifier(ss, opt.r, opt.window, go);
    ordered_json j;
    j["document"] = path;
    j["r"] = opt.r;
    j["window"] = {{"s_max", opt.window.s_max}, {"t_abs", opt.window.t_abs}};
    j["budget"] = {{"systems", go.systems_budget}, {"evaluations", go.budget}};
    j["hypothesis_ok"] = v.hypothesis_ok;
    j["hypothesis_report"] = v.hypothesis_report;
    j["targets"] = ordered_json::array();
    for (const auto& t : v.targets)
        j["targets"].push_back({{"s", -t.key.n}, {"t", t.key.t()}, {"weight", t.key.g.weight}, {"dim", t.dim},
                                {"certified", t.certified}});
    j["all_certified"] = v.all_certified();
    j["exhaustive"] = v.closure.exhaustive;
    j["brackets_tried"] = v.closure.brackets_tried;
    j["certificates"] = ordered_json::array();
    for (const auto& c : v.closure.classes) j["certificates"].push_back(v.closure.render(c.id));
    if (!v.hypothesis_ok) {
        out << j.dump(2) << '\n';
        return negative;
    }
    if (!v.all_certified() && !v.closure.exhaustive) throw Exhausted{j};
    out << j.dump(2) << '\n';
    return v.all_certified() ? ok : negative;
}

// ---------------------------------------------------------------- moss

struct MossCliOptions {
    int k = 2;
    std::string entries;
    std::size_t budget = 0;
};

ordered_json key_json(const CellKey& k) { return {{"s", -k.n}, {"t", k.t()}, {"weight", k.g.weight}}; }

int cmd_moss(const std::string& path, const MossCliOptions& opt, std::ostream& out) {
    const FilteredDGA x = to_filtered(load_algebra(path));
    if (!x.is_multiplicative()) throw DocumentError("/products", "the Moss check needs a multiplicative document");
    const SpectralSequence ss(x);
    std::vector<PageClass> entries;
    for (const auto& name : split(opt.entries, ';')) {
        auto i = x.algebra().find(name);
        if (!i) throw ResolutionError("unknown name '" + name + "'");
        const Chain c = x.algebra().basis_chain(*i);
        const CellKey key{x.level(*i), c.grade};
        const auto cell = ss.cell(opt.k, key);
        auto coords = cell->coords(cell->project(c.coeffs));
        if (!coords || is_zero(*coords))
            throw ValidationError("'" + name + "' does not give a nonzero class on E_" + std::to_string(opt.k));
        entries.push_back({key, std::move(*coords)});
    }
    MossOptions mo;
    mo.systems_budget = opt.budget;
    const MossReport rep = moss_check(ss, opt.k, entries, mo);
    ordered_json j;
    j["document"] = path;
    j["k"] = opt.k;
    j["entries"] = split(opt.entries, ';');
    j["budget"] = {{"systems", mo.systems_budget}, {"values", mo.value_limit}};
    j["value_cell"] = key_json(rep.value_key);
    ordered_json hyp;
    hyp["entries_permanent"] = rep.entries_permanent;
    hyp["crossing_ok"] = rep.crossing.ok;
    hyp["page_bracket_defined"] = rep.page_defined;
    hyp["total_bracket_defined"] = rep.total_defined;
    hyp["witnesses"] = ordered_json::array();
    for (const auto& w : rep.crossing.witnesses)
        hyp["witnesses"].push_back({{"ell", w.ell}, {"page", w.page}, {"cell", key_json(w.key)}, {"rep", w.rep}});
    j["hypothesis"] = std::move(hyp);
    j["page_values"] = rep.page_values;
    j["total_values"] = rep.total_values;
    j["exhaustive"] = rep.exhaustive;
    std::string status = !rep.hypothesis_ok() ? "hypothesis fails"
                         : rep.detected_nonzero() ? "detected"
                         : rep.detected()         ? "detected (zero leading term)"
                                                  : "not detected";
    j["status"] = status;
    if (rep.match) {
        j["leading_term"] = rep.page_leading.at(rep.match->first);
    }
    j["message"] = rep.message;
    if (rep.hypothesis_ok() && !rep.detected() && !rep.exhaustive) throw Exhausted{j};
    out << j.dump(2) << '\n';
    return rep.hypothesis_ok() && rep.detected() ? ok : negative;
}

}  // namespace

std::size_t default_budget() {
    if (const char* env = std::getenv("FILTSS_BUDGET")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size() && v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::size_t{1} << 20;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Filtered spectral sequences, brackets and charts"};
    app.require_subcommand(1);
    std::string input;
    std::size_t budget = default_budget();

    PagesOptions po;
    std::string grading = "s";
    auto* pages = app.add_subcommand("pages", "page dimensions and differentials");
    pages->add_option("input", input, "algebra document")->required();
    pages->add_option("--max-page", po.max_page, "last page (default: the stabilization page)");
    pages->add_option("--grading", grading, "s or n")->check(CLI::IsMember({"s", "n"}));
    pages->add_option("--format", po.format, "tsv, json or svg")->check(CLI::IsMember({"tsv", "json", "svg"}));

    MasseyOptions mo;
    auto* massey = app.add_subcommand("massey", "matric Massey product in homology");
    massey->add_option("input", input, "algebra document");
    massey->add_option("--bracket", mo.bracket, "entries separated by ';'");
    massey->add_option("--matrices", mo.spec_path, "bracket-spec document with matrix entries");
    massey->add_option("--cobar", mo.cobar_bound, "use the cobar construction on the dual Steenrod algebra up to t");
    massey->add_option("--budget", budget, "defining systems");

    auto* realize = app.add_subcommand("realize", "filtered algebra realizing a chart");
    realize->add_option("input", input, "chart document")->required();

    KoszulOptions ko;
    auto* koszul = app.add_subcommand("koszul", "Koszul test by bar-construction Tor");
    koszul->add_option("input", input, "algebra document")->required();
    koszul->add_option("--mode", ko.mode, "classical or derived")->check(CLI::IsMember({"classical", "derived"}));
    koszul->add_option("--s-max", ko.bounds.s_max, "longest bar word");
    koszul->add_option("--weight-max", ko.bounds.weight_max, "weight bound");
    koszul->add_option("--budget", budget, "unused; recorded for uniformity");

    GeneratorsOptions go;
    auto* gens = app.add_subcommand("generators", "certify E_{2,r} classes from low-s survivors");
    gens->add_option("input", input, "algebra document")->required();
    gens->add_option("--page", go.r, "r");
    gens->add_option("--s-max", go.window.s_max, "window");
    gens->add_option("--t-abs", go.window.t_abs, "window");
    gens->add_option("--budget", budget, "defining systems per bracket");

    MossCliOptions ms;
    auto* moss = app.add_subcommand("moss", "bracket on E_k against the total bracket");
    moss->add_option("input", input, "algebra document")->required();
    moss->add_option("--k", ms.k, "page");
    moss->add_option("--entries", ms.entries, "basis names separated by ';'")->required();
    moss->add_option("--budget", budget, "defining systems");

    std::vector<std::string> argv_store{"filtss"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return invalid;
    }

    try {
        po.grading = grading == "n" ? ChartGrading::n : ChartGrading::s;
        if (*pages) return cmd_pages(input, po, out);
        if (*massey) {
            mo.budget = budget;
            if (mo.cobar_bound <= 0 && input.empty()) throw ResolutionError("massey needs an input document or --cobar");
            if (mo.bracket.empty() == mo.spec_path.empty())
                throw ResolutionError("give exactly one of --bracket and --matrices");
            return cmd_massey(input, mo, out);
        }
        if (*realize) return cmd_realize(input, out);
        if (*koszul) return cmd_koszul(input, ko, out);
        if (*gens) {
            go.budget = budget;
            return cmd_generators(input, go, out);
        }
        if (*moss) {
            ms.budget = budget;
            return cmd_moss(input, ms, out);
        }
    } catch (const Exhausted& e) {
        out << e.report.dump(2) << '\n';
        err << "budget exhausted\n";
        return budget_exhausted;
    } catch (const BudgetExceeded& e) {
        err << "budget exhausted: " << e.what() << '\n';
        return budget_exhausted;
    } catch (const DocumentError& e) {
        err << "invalid input:\n" << e.report();
        return invalid;
    } catch (const ResolutionError& e) {
        err << "resolution error: " << e.what() << '\n';
        return invalid;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return invalid;
    } catch (const CapacityError& e) {
        err << "capacity: " << e.what() << '\n';
        return invalid;
    } catch (const RangeError& e) {
        err << "range error: " << e.what() << '\n';
        return invalid;
    }
    return invalid;
}

}  // namespace filtss::cli
