#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ruledistill/episode.hpp"
#include "ruledistill/formula.hpp"

namespace rd {

/// A test object with its printed reference values, one per column of the
/// owning concept. `truth` is set for objects whose category is known
/// (training items and the fully labelled concepts).
struct BenchmarkItem {
    std::string label;
    Object object;
    std::optional<bool> truth; // true = category A
    std::vector<double> reference;
};

/// One category structure: what the learner is trained on and what it is
/// tested on.
struct BenchmarkConcept {
    std::string name;
    std::vector<LabeledExample> training;
    std::vector<BenchmarkItem> tests;
    std::vector<std::string> columns; // names of the reference columns

    /// Index of a reference column; throws InvalidArgument if absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> column_values(const std::string& name) const;
    std::vector<Object> test_objects() const;
    bool has_truth() const;
};

struct BenchmarkTable {
    std::string name;
    int n_features = 4;
    std::vector<BenchmarkConcept> concepts;

    const BenchmarkConcept& concept_named(const std::string& name) const;
};

/// medin-schaffer, ls-nls, shj and medin82, with the reference columns as
/// printed.
const std::vector<BenchmarkTable>& builtin_benchmarks();

/// Looks a benchmark up by name; throws ConfigError for unknown names.
const BenchmarkTable& benchmark(const std::string& name);

std::vector<std::string> benchmark_names();

/// Long-format CSV of the embedded data:
/// benchmark,concept,item,object,truth,column,value
std::string reference_csv(const BenchmarkTable& table);

struct ReferenceRow {
    std::string benchmark, concept_name, item, object;
    std::optional<bool> truth;
    std::string column;
    double value = 0.0;

    friend bool operator==(const ReferenceRow&, const ReferenceRow&) = default;
};

std::vector<ReferenceRow> reference_rows(const BenchmarkTable& table);
std::vector<ReferenceRow> parse_reference_csv(const std::string& text);

} // namespace rd
