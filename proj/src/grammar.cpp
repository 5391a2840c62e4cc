#include "ruledistill/grammar.hpp"

#include <cmath>
#include <optional>
#include <set>

#include "ruledistill/errors.hpp"

namespace rd {

std::string Production::to_string() const {
    std::string out = lhs + " ->";
    for (const auto& s : rhs) out += " " + s;
    return out;
}

Grammar default_grammar(int n_features) {
    if (n_features < 1 || n_features > kMaxFeatures)
        throw InvalidArgument("default_grammar: n_features must be in [1, " + std::to_string(kMaxFeatures) +
                              "], got " + std::to_string(n_features));
    Grammar g;
    g.n_features_ = n_features;
    auto& nts = g.nonterminals_;
    nts.push_back({"S", {{"S", {"forall_x", "l(x)", "<=>", "D_top"}}}});
    nts.push_back({"D_top", {{"D_top", {"C_top", "or", "D"}}}});
    nts.push_back({"C_top", {{"C_top", {"P", "and", "C"}}}});
    nts.push_back({"D", {{"D", {"C", "or", "D"}}, {"D", {"False"}}}});
    nts.push_back({"C", {{"C", {"P", "and", "C"}}, {"C", {"True"}}}});
    Nonterminal p{"P", {}};
    for (int i = 1; i <= n_features; ++i) p.productions.push_back({"P", {"F_" + std::to_string(i)}});
    nts.push_back(std::move(p));
    for (int i = 1; i <= n_features; ++i) {
        const std::string name = "F_" + std::to_string(i);
        const std::string f = "f_" + std::to_string(i) + "(x)";
        nts.push_back({name, {{name, {f + "=1"}}, {name, {f + "=0"}}}});
    }
    g.validate();
    return g;
}

void Grammar::validate() const {
    std::set<std::string> declared;
    for (const auto& nt : nonterminals_) declared.insert(nt.name);
    static const std::set<std::string> connectives = {"forall_x", "l(x)", "<=>", "or", "and", "True", "False"};
    for (const auto& nt : nonterminals_) {
        if (nt.productions.empty()) throw InvalidArgument("nonterminal " + nt.name + " has no productions");
        for (const auto& p : nt.productions) {
            if (p.lhs != nt.name) throw InvalidArgument("production " + p.to_string() + " filed under " + nt.name);
            for (const auto& sym : p.rhs) {
                if (declared.count(sym) || connectives.count(sym)) continue;
                // feature terminals f_i(x)=v
                if (sym.rfind("f_", 0) == 0 && (sym.ends_with("(x)=1") || sym.ends_with("(x)=0"))) continue;
                throw InvalidArgument("production " + p.to_string() + " references undeclared symbol " + sym);
            }
        }
    }
}

ProbTable::ProbTable(std::vector<std::vector<double>> probs) : probs_(std::move(probs)) {
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const auto& row = probs_[i];
        if (row.empty()) throw InvalidArgument("probability row " + std::to_string(i) + " is empty");
        double total = 0.0;
        for (double p : row) {
            if (!(p >= 0.0) || !std::isfinite(p))
                throw InvalidArgument("probability row " + std::to_string(i) + " has a negative or non-finite entry");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidArgument("probability row " + std::to_string(i) + " sums to " + std::to_string(total));
    }
}

ProbTable ProbTable::uniform(const Grammar& grammar) {
    std::vector<std::vector<double>> rows;
    for (const auto& nt : grammar.nonterminals()) {
        const auto k = nt.productions.size();
        rows.emplace_back(k, 1.0 / static_cast<double>(k));
    }
    return ProbTable(std::move(rows));
}

void ProbTable::check_compatible(const Grammar& grammar) const {
    const auto& nts = grammar.nonterminals();
    if (probs_.size() != nts.size()) throw InvalidArgument("probability table does not match grammar");
    for (std::size_t i = 0; i < nts.size(); ++i)
        if (probs_[i].size() != nts[i].productions.size())
            throw InvalidArgument("probability row for " + nts[i].name + " has wrong length");
}

std::uint32_t ProductionCounts::total(std::size_t nonterminal) const {
    std::uint32_t t = 0;
    for (auto c : counts.at(nonterminal)) t += c;
    return t;
}

ProbTable sample_prob_table(const Grammar& grammar, double dirichlet_alpha, Rng& rng) {
    if (!(dirichlet_alpha > 0.0)) throw InvalidArgument("dirichlet_alpha must be positive");
    std::vector<std::vector<double>> rows;
    for (const auto& nt : grammar.nonterminals()) {
        auto row = rng.dirichlet(nt.productions.size(), dirichlet_alpha);
        // renormalise so the row passes the 1e-12 sum check exactly as stored
        double total = 0.0;
        for (double p : row) total += p;
        for (double& p : row) p /= total;
        rows.push_back(std::move(row));
    }
    return ProbTable(std::move(rows));
}

namespace {

class Sampler {
public:
    Sampler(const Grammar& g, const ProbTable& probs, Rng& rng, int max_depth)
        : g_(g), probs_(probs), rng_(rng), max_depth_(max_depth) {}

    /// Empty when the attempt exceeded the depth cap.
    std::optional<Formula> derive() {
        depth_ = 0;
        Formula f;
        // S -> l(x) <=> D_top;  D_top -> C_top or D;  C_top -> P and C
        Conjunction first;
        first.literals.push_back(literal());
        if (!chain_c(first)) return std::nullopt;
        f.conjunctions.push_back(std::move(first));
        // D chain
        for (;;) {
            if (!expand()) return std::nullopt;
            if (rng_.categorical(probs_[Grammar::kD]) == Grammar::kStop) break;
            Conjunction c;
            if (!chain_c(c)) return std::nullopt;
            f.conjunctions.push_back(std::move(c));
        }
        return f;
    }

private:
    bool expand() { return ++depth_ <= max_depth_; }

    bool chain_c(Conjunction& c) {
        for (;;) {
            if (!expand()) return false;
            if (rng_.categorical(probs_[Grammar::kC]) == Grammar::kStop) return true;
            c.literals.push_back(literal());
        }
    }

    FeatureLiteral literal() {
        const int feature = static_cast<int>(rng_.categorical(probs_[Grammar::kP])) + 1;
        const auto v = rng_.categorical(probs_[g_.feature_nonterminal(feature)]);
        return {feature, v == Grammar::kValueOne};
    }

    const Grammar& g_;
    const ProbTable& probs_;
    Rng& rng_;
    int max_depth_;
    int depth_ = 0;
};

} // namespace

std::optional<Formula> try_sample_formula(const Grammar& grammar, const ProbTable& probs, Rng& rng, int max_depth) {
    if (max_depth < 2) throw InvalidArgument("sample_formula: max_depth must be at least 2");
    probs.check_compatible(grammar);
    return Sampler(grammar, probs, rng, max_depth).derive();
}

Formula sample_formula(const Grammar& grammar, const ProbTable& probs, Rng& rng, int max_depth) {
    if (max_depth < 2) throw InvalidArgument("sample_formula: max_depth must be at least 2");
    probs.check_compatible(grammar);
    Sampler sampler(grammar, probs, rng, max_depth);
    for (int attempt = 0; attempt < kMaxConsecutiveRejections; ++attempt) {
        if (auto f = sampler.derive()) return *std::move(f);
    }
    throw SamplingDiverged("sample_formula: " + std::to_string(kMaxConsecutiveRejections) +
                           " consecutive derivations exceeded depth " + std::to_string(max_depth));
}

} // namespace rd
