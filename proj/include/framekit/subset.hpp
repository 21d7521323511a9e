#pragma once

#include <cstddef>
#include <vector>

namespace framekit {

// Subset M of the index set {0, ..., universe-1}; indices are zero-based.
class Subset {
public:
    explicit Subset(std::size_t universe) : mask_(universe, false) {}
    Subset(std::size_t universe, const std::vector<std::size_t>& members);

    static Subset all(std::size_t universe);
    static Subset from_mask(std::vector<bool> mask);

    std::size_t universe() const { return mask_.size(); }
    bool contains(std::size_t index) const { return index < mask_.size() && mask_[index]; }
    Subset complement() const;
    std::vector<std::size_t> members() const;

private:
    std::vector<bool> mask_;
};

}  // namespace framekit
