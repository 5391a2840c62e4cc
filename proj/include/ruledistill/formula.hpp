#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rd {

/// Largest feature count supported by the object encoding and by the
/// truth-table machinery (2^6 objects fit one 64-bit mask).
inline constexpr int kMaxFeatures = 6;

/// A binary feature vector. Feature 1 is the leftmost character of the
/// bitstring, so "0111" has f1 = 0 and f2 = f3 = f4 = 1. The code is the
/// bitstring read as a binary number.
class Object {
public:
    Object() = default;
    Object(int n_features, std::uint32_t code);

    static Object parse(std::string_view bits);

    int n_features() const noexcept { return n_features_; }
    std::uint32_t code() const noexcept { return code_; }

    /// Value of feature `index` (1-based).
    bool feature(int index) const;

    std::string to_string() const;

    friend bool operator==(const Object&, const Object&) = default;

private:
    int n_features_ = 0;
    std::uint32_t code_ = 0;
};

/// All 2^n objects in code order.
std::vector<Object> all_objects(int n_features);

struct FeatureLiteral {
    int feature = 1; // 1-based
    bool value = true;

    friend bool operator==(const FeatureLiteral&, const FeatureLiteral&) = default;
};

/// An empty literal list is the `True` tail of a C-chain.
struct Conjunction {
    std::vector<FeatureLiteral> literals;

    friend bool operator==(const Conjunction&, const Conjunction&) = default;
};

/// Disjunction of conjunctions in derivation order. An empty list is `False`.
struct Formula {
    std::vector<Conjunction> conjunctions;

    std::size_t literal_count() const;
    int max_feature() const;

    /// Text form, e.g. `(f3=1 & f2=0) | (f1=1)`. The empty disjunction prints
    /// as `FALSE` and an empty conjunction as `(TRUE)`.
    std::string to_string() const;

    /// Inverse of to_string; throws InvalidArgument on malformed text.
    static Formula parse(std::string_view text);

    friend bool operator==(const Formula&, const Formula&) = default;
};

/// True iff some conjunction has all of its literals satisfied.
bool evaluate(const Formula& formula, const Object& object);

/// Bitmask over object codes of the objects satisfying the formula.
std::uint64_t truth_table(const Formula& formula, int n_features);

} // namespace rd
