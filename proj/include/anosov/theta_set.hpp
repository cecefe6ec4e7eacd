#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "anosov/error.hpp"

namespace anosov {

/// Subset of {1, ..., d-1} indexing eigenvalue gaps. May be empty.
class ThetaSet {
public:
    ThetaSet() = default;

    ThetaSet(int d, std::vector<int> members) : d_(d), members_(std::move(members)) {
        if (d < 0) throw InvalidArgument("ThetaSet: negative ambient dimension");
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        for (int k : members_) {
            if (k < 1 || k > d - 1) {
                throw InvalidArgument("ThetaSet: index " + std::to_string(k) + " outside 1.." + std::to_string(d - 1));
            }
        }
    }

    /// All of {1, ..., d-1}.
    static ThetaSet full(int d) {
        std::vector<int> m;
        for (int k = 1; k < d; ++k) m.push_back(k);
        return ThetaSet(d, std::move(m));
    }

    int dim() const { return d_; }
    const std::vector<int>& members() const { return members_; }
    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    bool contains(int k) const { return std::binary_search(members_.begin(), members_.end(), k); }
    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    friend bool operator==(const ThetaSet&, const ThetaSet&) = default;

    std::string to_string() const {
        std::string s = "{";
        for (std::size_t i = 0; i < members_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(members_[i]);
        }
        return s + "}";
    }

private:
    int d_ = 0;
    std::vector<int> members_;
};

}  // namespace anosov
