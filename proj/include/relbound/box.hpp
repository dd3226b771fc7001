#ifndef RELBOUND_BOX_HPP
#define RELBOUND_BOX_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <relbound/interval.hpp>

namespace relbound
{

// Ordered (name, interval) pairs; the input domain of a function.
class Box
{
public:
    Box() = default;
    // Throws std::invalid_argument on duplicate names.
    explicit Box(std::vector<std::pair<std::string, Interval>> entries);

    std::size_t size() const
    {
        return entries_.size();
    }
    const std::string &name(std::size_t i) const
    {
        return entries_[i].first;
    }
    const Interval &operator[](std::size_t i) const
    {
        return entries_[i].second;
    }
    std::optional<std::size_t> index_of(const std::string &name) const;
    const std::vector<std::pair<std::string, Interval>> &entries() const
    {
        return entries_;
    }
    std::vector<Interval> intervals() const;

    Box with(std::size_t i, Interval x) const;
    bool subset_of(const Box &o) const;

    friend bool operator==(const Box &a, const Box &b) = default;

    // (u -> [0.0,0.125]) style
    std::string str() const;

private:
    std::vector<std::pair<std::string, Interval>> entries_;
};

// Exact decimal when finite, otherwise "p/q"; integers get a trailing ".0".
std::string format_endpoint(const Rational &x);

} // namespace relbound

#endif
