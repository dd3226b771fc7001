#include <relbound/box.hpp>

#include <stdexcept>

namespace relbound
{

Box::Box(std::vector<std::pair<std::string, Interval>> entries) : entries_(std::move(entries))
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (entries_[i].first == entries_[j].first) {
                throw std::invalid_argument("duplicate variable '" + entries_[i].first + "' in box");
            }
        }
    }
}

std::optional<std::size_t> Box::index_of(const std::string &name) const
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].first == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::vector<Interval> Box::intervals() const
{
    std::vector<Interval> out;
    out.reserve(entries_.size());
    for (const auto &e : entries_) {
        out.push_back(e.second);
    }
    return out;
}

Box Box::with(std::size_t i, Interval x) const
{
    Box b = *this;
    b.entries_.at(i).second = std::move(x);
    return b;
}

bool Box::subset_of(const Box &o) const
{
    if (o.size() != size()) {
        return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (name(i) != o.name(i) || !(*this)[i].subset_of(o[i])) {
            return false;
        }
    }
    return true;
}

std::string format_endpoint(const Rational &x)
{
    std::string d = x.exact_decimal();
    return d.empty() ? x.str() : d;
}

std::string Box::str() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i > 0) {
            s += ", ";
        }
        s += entries_[i].first + " -> [" + format_endpoint(entries_[i].second.lo()) + "," +
             format_endpoint(entries_[i].second.hi()) + "]";
    }
    return s + ")";
}

} // namespace relbound
