#ifndef VPART_SITE_SET_H_
#define VPART_SITE_SET_H_

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace vpart {

// A set of site indices in [0, 64), stored as a bit mask.
class SiteSet {
 public:
  constexpr SiteSet() = default;
  constexpr SiteSet(std::initializer_list<int> sites) {
    for (int s : sites) insert(s);
  }

  static constexpr SiteSet from_mask(uint64_t mask) {
    SiteSet set;
    set.mask_ = mask;
    return set;
  }
  static constexpr SiteSet all(int site_count) {
    return from_mask(site_count >= 64 ? ~uint64_t{0}
                                      : (uint64_t{1} << site_count) - 1);
  }

  constexpr bool contains(int site) const {
    return site >= 0 && site < 64 && ((mask_ >> site) & 1u);
  }
  constexpr void insert(int site) { mask_ |= uint64_t{1} << site; }
  constexpr void erase(int site) { mask_ &= ~(uint64_t{1} << site); }

  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr uint64_t mask() const { return mask_; }
  // Lowest site in the set; 64 when empty.
  constexpr int first() const { return std::countr_zero(mask_); }

  std::vector<int> sites() const {
    std::vector<int> out;
    for (uint64_t m = mask_; m != 0; m &= m - 1) {
      out.push_back(std::countr_zero(m));
    }
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (uint64_t m = mask_; m != 0; m &= m - 1) f(std::countr_zero(m));
  }

  constexpr SiteSet operator&(SiteSet other) const {
    return from_mask(mask_ & other.mask_);
  }
  constexpr SiteSet operator|(SiteSet other) const {
    return from_mask(mask_ | other.mask_);
  }
  constexpr bool includes(SiteSet other) const {
    return (other.mask_ & ~mask_) == 0;
  }

  constexpr auto operator<=>(const SiteSet&) const = default;

 private:
  uint64_t mask_ = 0;
};

}  // namespace vpart

#endif  // VPART_SITE_SET_H_
