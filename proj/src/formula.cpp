#include "ruledistill/formula.hpp"

#include <algorithm>
#include <charconv>

#include "ruledistill/errors.hpp"

namespace rd {

Object::Object(int n_features, std::uint32_t code) : n_features_(n_features), code_(code) {
    if (n_features < 1 || n_features > kMaxFeatures)
        throw InvalidArgument("object feature count out of range: " + std::to_string(n_features));
    if (code >= (1u << n_features))
        throw InvalidArgument("object code " + std::to_string(code) + " out of range for " +
                              std::to_string(n_features) + " features");
}

Object Object::parse(std::string_view bits) {
    if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxFeatures))
        throw InvalidArgument("bad object bitstring '" + std::string(bits) + "'");
    std::uint32_t code = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw InvalidArgument("bad object bitstring '" + std::string(bits) + "'");
        code = (code << 1) | static_cast<std::uint32_t>(c - '0');
    }
    return Object(static_cast<int>(bits.size()), code);
}

bool Object::feature(int index) const {
    if (index < 1 || index > n_features_)
        throw InvalidArgument("feature index " + std::to_string(index) + " out of range");
    return (code_ >> (n_features_ - index)) & 1u;
}

std::string Object::to_string() const {
    std::string s(static_cast<std::size_t>(n_features_), '0');
    for (int i = 0; i < n_features_; ++i)
        if ((code_ >> (n_features_ - 1 - i)) & 1u) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

std::vector<Object> all_objects(int n_features) {
    if (n_features < 1 || n_features > kMaxFeatures)
        throw InvalidArgument("feature count out of range: " + std::to_string(n_features));
    std::vector<Object> out;
    out.reserve(std::size_t{1} << n_features);
    for (std::uint32_t c = 0; c < (1u << n_features); ++c) out.emplace_back(n_features, c);
    return out;
}

std::size_t Formula::literal_count() const {
    std::size_t n = 0;
    for (const auto& c : conjunctions) n += c.literals.size();
    return n;
}

int Formula::max_feature() const {
    int m = 0;
    for (const auto& c : conjunctions)
        for (const auto& l : c.literals) m = std::max(m, l.feature);
    return m;
}

std::string Formula::to_string() const {
    if (conjunctions.empty()) return "FALSE";
    std::string out;
    for (std::size_t i = 0; i < conjunctions.size(); ++i) {
        if (i) out += " | ";
        out += '(';
        const auto& lits = conjunctions[i].literals;
        if (lits.empty()) out += "TRUE";
        for (std::size_t j = 0; j < lits.size(); ++j) {
            if (j) out += " & ";
            out += 'f';
            out += std::to_string(lits[j].feature);
            out += lits[j].value ? "=1" : "=0";
        }
        out += ')';
    }
    return out;
}

namespace {

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) {}

    Formula run() {
        Formula f;
        if (text_ == "FALSE") return f;
        for (;;) {
            f.conjunctions.push_back(conjunction());
            if (pos_ == text_.size()) break;
            expect(" | ");
        }
        return f;
    }

private:
    Conjunction conjunction() {
        Conjunction c;
        expect("(");
        if (accept("TRUE")) {
            expect(")");
            return c;
        }
        for (;;) {
            c.literals.push_back(literal());
            if (accept(")")) break;
            expect(" & ");
        }
        return c;
    }

    FeatureLiteral literal() {
        expect("f");
        int feature = 0;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(begin, end, feature);
        if (ec != std::errc() || ptr == begin || *begin == '0' || feature < 1) fail("feature index");
        pos_ += static_cast<std::size_t>(ptr - begin);
        expect("=");
        if (accept("1")) return {feature, true};
        if (accept("0")) return {feature, false};
        fail("literal value");
    }

    bool accept(std::string_view token) {
        if (text_.substr(pos_, token.size()) != token) return false;
        pos_ += token.size();
        return true;
    }

    void expect(std::string_view token) {
        if (!accept(token)) fail("'" + std::string(token) + "'");
    }

    [[noreturn]] void fail(const std::string& wanted) const {
        throw InvalidArgument("formula parse error at offset " + std::to_string(pos_) + ": expected " +
                              wanted + " in '" + std::string(text_) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Formula Formula::parse(std::string_view text) { return FormulaParser(text).run(); }

bool evaluate(const Formula& formula, const Object& object) {
    for (const auto& c : formula.conjunctions)
        for (const auto& l : c.literals)
            if (l.feature < 1 || l.feature > object.n_features())
                throw InvalidArgument("formula references feature " + std::to_string(l.feature) +
                                      " but the object has " + std::to_string(object.n_features()));
    for (const auto& c : formula.conjunctions) {
        bool all = true;
        for (const auto& l : c.literals) {
            if (object.feature(l.feature) != l.value) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

std::uint64_t truth_table(const Formula& formula, int n_features) {
    std::uint64_t mask = 0;
    for (const auto& o : all_objects(n_features))
        if (evaluate(formula, o)) mask |= std::uint64_t{1} << o.code();
    return mask;
}

} // namespace rd
