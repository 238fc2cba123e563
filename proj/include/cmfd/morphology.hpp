#ifndef CMFD_MORPHOLOGY_HPP
#define CMFD_MORPHOLOGY_HPP

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "cmfd/errors.hpp"
#include "cmfd/image.hpp"

namespace cmfd {

/// Binary structuring element, kept as the set of its cell offsets relative
/// to the anchor.
class StructuringElement {
public:
    struct Offset {
        int dr = 0;
        int dc = 0;
        friend constexpr auto operator<=>(const Offset&, const Offset&) = default;
    };

    /// k x k element from a row-major boolean grid, anchored at (k/2, k/2).
    StructuringElement(int k, const std::vector<bool>& cells) {
        if (k < 1 || cells.size() != static_cast<std::size_t>(k) * k)
            throw InvalidArgument("structuring element grid must be k x k with k >= 1");
        const int anchor = k / 2;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (cells[static_cast<std::size_t>(i) * k + j]) offsets_.push_back({i - anchor, j - anchor});
        if (offsets_.empty()) throw InvalidArgument("structuring element has no cells");
    }

    static StructuringElement square(int k) {
        return StructuringElement(k, std::vector<bool>(static_cast<std::size_t>(k) * k, true));
    }

    /// The point reflection about the anchor, w = -b for every cell b.
    StructuringElement reflect() const {
        StructuringElement out = *this;
        for (auto& o : out.offsets_) o = {-o.dr, -o.dc};
        std::sort(out.offsets_.begin(), out.offsets_.end());
        return out;
    }

    bool contains_origin() const {
        return std::find(offsets_.begin(), offsets_.end(), Offset{0, 0}) != offsets_.end();
    }

    const std::vector<Offset>& offsets() const noexcept { return offsets_; }

private:
    StructuringElement() = default;
    std::vector<Offset> offsets_;
};

// Pixels outside the frame count as background for both operators.

/// z is set iff the reflected element translated to z hits a, i.e. z - b is
/// in a for some cell b.
inline BinaryMask dilate(const BinaryMask& a, const StructuringElement& se) {
    BinaryMask out(a.width(), a.height());
    for (int r = 0; r < a.height(); ++r)
        for (int c = 0; c < a.width(); ++c)
            for (const auto& o : se.offsets())
                if (a.contains(r - o.dr, c - o.dc)) {
                    out.set(r, c);
                    break;
                }
    return out;
}

/// z is set iff the element translated to z lies entirely inside a.
inline BinaryMask erode(const BinaryMask& a, const StructuringElement& se) {
    BinaryMask out(a.width(), a.height());
    for (int r = 0; r < a.height(); ++r)
        for (int c = 0; c < a.width(); ++c) {
            bool fits = true;
            for (const auto& o : se.offsets())
                if (!a.contains(r + o.dr, c + o.dc)) {
                    fits = false;
                    break;
                }
            out.set(r, c, fits);
        }
    return out;
}

/// Dilation followed by erosion, evaluated on a canvas padded by the element
/// radius so that pixels on the frame edge are not eroded by the padding.
/// The result equals the closing in the unbounded plane, which never leaves
/// the frame.
inline BinaryMask close(const BinaryMask& a, const StructuringElement& se) {
    int pad = 0;
    for (const auto& o : se.offsets()) pad = std::max({pad, std::abs(o.dr), std::abs(o.dc)});

    BinaryMask canvas(a.width() + 2 * pad, a.height() + 2 * pad);
    for (int r = 0; r < a.height(); ++r)
        for (int c = 0; c < a.width(); ++c)
            if (a.get(r, c)) canvas.set(r + pad, c + pad);

    const BinaryMask closed = erode(dilate(canvas, se), se);
    BinaryMask out(a.width(), a.height());
    for (int r = 0; r < a.height(); ++r)
        for (int c = 0; c < a.width(); ++c) out.set(r, c, closed.get(r + pad, c + pad));
    return out;
}

}  // namespace cmfd

#endif  // CMFD_MORPHOLOGY_HPP
