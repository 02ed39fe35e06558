#pragma once

#include "filtss/filtered.hpp"
#include "filtss/sseq.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace filtss {

// One problem per entry, each carrying a location (JSON pointer, or line:column for syntax).
class DocumentError : public ValidationError {
public:
    struct Problem {
        std::string where;
        std::string what;
    };
    explicit DocumentError(std::vector<Problem> problems);
    DocumentError(const std::string& where, const std::string& what)
        : DocumentError(std::vector<Problem>{Problem{where, what}}) {}
    const std::vector<Problem>& problems() const { return problems_; }
    std::string report() const;

private:
    std::vector<Problem> problems_;
};

struct AlgebraDocument {
    struct Generator {
        std::string name;
        int n = 0;
        int t = 0;
        int weight = 0;
        bool operator==(const Generator&) const = default;
    };
    struct Term {
        std::string gen;
        Scalar coeff = 1;
        bool operator==(const Term&) const = default;
    };
    struct DiffEntry {
        std::string from;
        std::string to;
        Scalar coeff = 1;
        bool operator==(const DiffEntry&) const = default;
    };
    struct Product {
        std::string left;
        std::string right;
        std::vector<Term> result;
        bool operator==(const Product&) const = default;
    };
    std::uint32_t prime = 2;
    std::vector<Generator> generators;
    std::vector<DiffEntry> differential;
    std::vector<Product> products;
    std::optional<std::string> unit;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    bool operator==(const AlgebraDocument&) const = default;
};

// parse text, with line:column on syntax errors
nlohmann::ordered_json parse_json(const std::string& text);

AlgebraDocument algebra_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const AlgebraDocument& d);

// Builds and validates (d^2 = 0, Leibniz, filtration). Failures become DocumentErrors.
FilteredDGA to_filtered(const AlgebraDocument& d);
// Basis elements become generators; every nonzero basis product is listed.
AlgebraDocument document_of(const FilteredDGA& x);

enum class ChartGrading { s, n };

// "grading": "s" stores s = -n for each class
AbstractChart chart_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const AbstractChart& c, ChartGrading grading = ChartGrading::s);

bool same_chart(const AbstractChart& a, const AbstractChart& b);

}  // namespace filtss
