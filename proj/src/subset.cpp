#include "framekit/subset.hpp"

#include "framekit/errors.hpp"

namespace framekit {

Subset::Subset(std::size_t universe, const std::vector<std::size_t>& members) : mask_(universe, false) {
    for (std::size_t index : members) {
        if (index >= universe) throw InvalidInput("subset index out of range");
        mask_[index] = true;
    }
}

Subset Subset::all(std::size_t universe) {
    Subset s(universe);
    s.mask_.assign(universe, true);
    return s;
}

Subset Subset::from_mask(std::vector<bool> mask) {
    Subset s(0);
    s.mask_ = std::move(mask);
    return s;
}

Subset Subset::complement() const {
    Subset s(universe());
    for (std::size_t i = 0; i < mask_.size(); ++i) s.mask_[i] = !mask_[i];
    return s;
}

std::vector<std::size_t> Subset::members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mask_.size(); ++i) {
        if (mask_[i]) out.push_back(i);
    }
    return out;
}

}  // namespace framekit
