#include "ruledistill/benchmarks.hpp"

#include <sstream>

#include "ruledistill/csv.hpp"
#include "ruledistill/errors.hpp"

namespace rd {

std::size_t BenchmarkConcept::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw InvalidArgument("concept " + this->name + " has no column " + name);
}

std::vector<double> BenchmarkConcept::column_values(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    for (const auto& t : tests) out.push_back(t.reference.at(c));
    return out;
}

std::vector<Object> BenchmarkConcept::test_objects() const {
    std::vector<Object> out;
    for (const auto& t : tests) out.push_back(t.object);
    return out;
}

bool BenchmarkConcept::has_truth() const {
    for (const auto& t : tests)
        if (t.truth) return true;
    return false;
}

const BenchmarkConcept& BenchmarkTable::concept_named(const std::string& concept_name) const {
    for (const auto& c : concepts)
        if (c.name == concept_name) return c;
    throw InvalidArgument("benchmark " + name + " has no concept " + concept_name);
}

namespace {

struct Row {
    const char* label;
    const char* bits;
    std::vector<double> reference;
};

// Items labelled A* / B* are training items of that category; others are transfer items.
BenchmarkConcept labelled_table(std::string name, std::vector<std::string> columns, const std::vector<Row>& rows) {
    BenchmarkConcept c{std::move(name), {}, {}, std::move(columns)};
    for (const auto& r : rows) {
        BenchmarkItem item{r.label, Object::parse(r.bits), std::nullopt, r.reference};
        if (r.label[0] == 'A' || r.label[0] == 'B') {
            item.truth = r.label[0] == 'A';
            c.training.push_back({item.object, *item.truth, false});
        }
        c.tests.push_back(std::move(item));
    }
    return c;
}

BenchmarkTable medin_schaffer() {
    return {"medin-schaffer",
            4,
            {labelled_table("medin-schaffer", {"human", "rr_b1", "prior_trained_b2", "standard"},
                            {
                                {"A1", "0001", {0.77, 0.82, 0.71, 0.52}},
                                {"A2", "0101", {0.78, 0.81, 0.76, 0.52}},
                                {"A3", "0100", {0.83, 0.92, 0.84, 0.52}},
                                {"A4", "0010", {0.64, 0.61, 0.69, 0.52}},
                                {"A5", "1000", {0.61, 0.61, 0.70, 0.52}},
                                {"B1", "0011", {0.39, 0.47, 0.40, 0.52}},
                                {"B2", "1001", {0.41, 0.47, 0.45, 0.52}},
                                {"B3", "1110", {0.21, 0.21, 0.22, 0.52}},
                                {"B4", "1111", {0.15, 0.07, 0.14, 0.52}},
                                {"T1", "0110", {0.56, 0.57, 0.56, 0.52}},
                                {"T2", "0111", {0.41, 0.44, 0.34, 0.52}},
                                {"T3", "0000", {0.82, 0.95, 0.84, 0.52}},
                                {"T4", "1101", {0.40, 0.44, 0.41, 0.52}},
                                {"T5", "1010", {0.32, 0.28, 0.39, 0.52}},
                                {"T6", "1100", {0.53, 0.57, 0.60, 0.52}},
                                {"T7", "1011", {0.20, 0.13, 0.19, 0.52}},
                            })}};
}

BenchmarkTable medin82() {
    return {"medin82",
            4,
            {labelled_table("medin82", {"human_initial", "rr_b1", "maml_b1", "human_final", "rr_b7", "maml_b7"},
                            {
                                {"A1", "1111", {0.64, 0.84, 0.84, 0.96, 1, 0.98}},
                                {"A2", "0111", {0.64, 0.54, 0.67, 0.93, 1, 0.97}},
                                {"A3", "1100", {0.66, 0.84, 0.83, 1, 1, 0.98}},
                                {"A4", "1000", {0.55, 0.54, 0.66, 0.96, 0.99, 0.96}},
                                {"B1", "1010", {0.57, 0.46, 0.32, 0.02, 0, 0.03}},
                                {"B2", "0010", {0.43, 0.16, 0.15, 0, 0, 0.02}},
                                {"B3", "0101", {0.46, 0.46, 0.31, 0.05, 0.01, 0.03}},
                                {"B4", "0001", {0.34, 0.16, 0.15, 0, 0, 0.02}},
                                {"T1", "0000", {0.46, 0.2, 0.22, 0.66, 0.56, 0.14}},
                                {"T2", "0011", {0.41, 0.2, 0.26, 0.64, 0.55, 0.32}},
                                {"T3", "0100", {0.52, 0.5, 0.45, 0.64, 0.57, 0.3}},
                                {"T4", "1011", {0.5, 0.5, 0.48, 0.66, 0.56, 0.38}},
                                {"T5", "1110", {0.73, 0.8, 0.72, 0.36, 0.45, 0.66}},
                                {"T6", "1101", {0.59, 0.8, 0.74, 0.36, 0.44, 0.79}},
                                {"T7", "0110", {0.39, 0.5, 0.49, 0.27, 0.44, 0.53}},
                                {"T8", "1001", {0.46, 0.5, 0.51, 0.3, 0.43, 0.63}},
                            })}};
}

BenchmarkConcept two_lists(std::string name, const std::vector<const char*>& a, const std::vector<const char*>& b) {
    std::vector<Row> rows;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < a.size(); ++i) labels.push_back("A" + std::to_string(i + 1));
    for (std::size_t i = 0; i < b.size(); ++i) labels.push_back("B" + std::to_string(i + 1));
    std::size_t k = 0;
    for (const auto* bits : a) rows.push_back({labels[k++].c_str(), bits, {}});
    for (const auto* bits : b) rows.push_back({labels[k++].c_str(), bits, {}});
    return labelled_table(std::move(name), {}, rows);
}

BenchmarkTable ls_nls() {
    // 1000 is listed in both LS categories; kept as printed.
    return {"ls-nls",
            4,
            {two_lists("LS", {"1000", "0001", "0110"}, {"0111", "1000", "1001"}),
             two_lists("NLS", {"0011", "1100", "0000"}, {"1111", "1010", "0101"})}};
}

BenchmarkTable shj() {
    // category-A labels of objects 000, 001, ..., 111
    const std::vector<std::pair<const char*, const char*>> types = {
        {"I", "11110000"},  {"II", "11000011"}, {"III", "11100100"},
        {"IV", "11101000"}, {"V", "11100001"},  {"VI", "10010110"},
    };
    BenchmarkTable t{"shj", 3, {}};
    for (const auto& [name, labels] : types) {
        BenchmarkConcept c{name, {}, {}, {}};
        for (std::uint32_t code = 0; code < 8; ++code) {
            const Object o(3, code);
            const bool a = labels[code] == '1';
            c.training.push_back({o, a, false});
            c.tests.push_back({o.to_string(), o, a, {}});
        }
        t.concepts.push_back(std::move(c));
    }
    return t;
}

std::string truth_text(const std::optional<bool>& t) { return t ? (*t ? "A" : "B") : ""; }

} // namespace

const std::vector<BenchmarkTable>& builtin_benchmarks() {
    static const std::vector<BenchmarkTable> tables = {medin_schaffer(), ls_nls(), shj(), medin82()};
    return tables;
}

const BenchmarkTable& benchmark(const std::string& name) {
    for (const auto& t : builtin_benchmarks())
        if (t.name == name) return t;
    throw ConfigError("unknown benchmark '" + name + "'");
}

std::vector<std::string> benchmark_names() {
    std::vector<std::string> out;
    for (const auto& t : builtin_benchmarks()) out.push_back(t.name);
    return out;
}

std::vector<ReferenceRow> reference_rows(const BenchmarkTable& table) {
    std::vector<ReferenceRow> out;
    for (const auto& c : table.concepts)
        for (const auto& item : c.tests) {
            const ReferenceRow base{table.name, c.name, item.label, item.object.to_string(), item.truth, "", 0.0};
            if (c.columns.empty()) out.push_back(base);
            for (std::size_t k = 0; k < c.columns.size(); ++k) {
                auto row = base;
                row.column = c.columns[k];
                row.value = item.reference.at(k);
                out.push_back(std::move(row));
            }
        }
    return out;
}

std::string reference_csv(const BenchmarkTable& table) {
    std::string out = "benchmark,concept,item,object,truth,column,value\n";
    for (const auto& r : reference_rows(table)) {
        out += csv_line({r.benchmark, r.concept_name, r.item, r.object, truth_text(r.truth), r.column,
                         r.column.empty() ? "" : format_double(r.value)});
        out += '\n';
    }
    return out;
}

std::vector<ReferenceRow> parse_reference_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<ReferenceRow> out;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (n == 1 || line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw ParseError("expected 7 fields", n);
        ReferenceRow r{f[0], f[1], f[2], f[3], std::nullopt, f[5], 0.0};
        if (f[4] == "A" || f[4] == "B") r.truth = f[4] == "A";
        else if (!f[4].empty()) throw ParseError("bad truth '" + f[4] + "'", n);
        if (!f[6].empty()) r.value = parse_double(f[6]);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace rd
