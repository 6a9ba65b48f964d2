#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "tropcong/rational.hpp"

namespace tropcong {

/// Element of the tropical semifield: a rational log-value or Bottom (-inf).
class TropScalar {
public:
    TropScalar() = default;
    TropScalar(Q v) : v_(std::move(v)) {}
    TropScalar(long v) : v_(Q(v)) {}

    static TropScalar bottom() { return {}; }

    bool is_bottom() const { return !v_.has_value(); }
    const Q& value() const
    {
        if (!v_) throw PreconditionError("value() of Bottom");
        return *v_;
    }

    friend TropScalar operator+(const TropScalar& a, const TropScalar& b)
    {
        if (a.is_bottom()) return b;
        if (b.is_bottom()) return a;
        return *a.v_ < *b.v_ ? b : a;
    }

    friend TropScalar operator*(const TropScalar& a, const TropScalar& b)
    {
        if (a.is_bottom() || b.is_bottom()) return {};
        return TropScalar(*a.v_ + *b.v_);
    }

    friend bool operator==(const TropScalar& a, const TropScalar& b)
    {
        if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
        return *a.v_ == *b.v_;
    }

    friend std::strong_ordering operator<=>(const TropScalar& a, const TropScalar& b)
    {
        if (a.is_bottom() || b.is_bottom()) return !a.is_bottom() <=> !b.is_bottom();
        int c = cmp(*a.v_, *b.v_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    std::string str() const { return is_bottom() ? "-inf" : format_rational(*v_); }

private:
    std::optional<Q> v_;
};

inline TropScalar parse_trop_scalar(const std::string& s)
{
    if (s == "-inf") return TropScalar::bottom();
    return TropScalar(parse_rational(s));
}

/// Vectors compared lexicographically (used for prime evaluations).
using LexVec = std::vector<TropScalar>;

}  // namespace tropcong
