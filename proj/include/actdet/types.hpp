#pragma once

#include <algorithm>
#include <stdexcept>

namespace actdet {

/// Half-open frame interval [start, end).
struct FrameInterval {
    int start = 0;
    int end = 0;

    int length() const { return end - start; }
    bool empty() const { return end <= start; }
    bool contains(int frame) const { return frame >= start && frame < end; }
    bool operator==(const FrameInterval&) const = default;
};

/// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    long long area() const {
        if (x1 <= x0 || y1 <= y0) return 0;
        return static_cast<long long>(x1 - x0) * (y1 - y0);
    }
    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
    bool operator==(const PixelRect&) const = default;
};

inline PixelRect intersect(const PixelRect& a, const PixelRect& b) {
    PixelRect r;
    r.x0 = std::max(a.x0, b.x0);
    r.y0 = std::max(a.y0, b.y0);
    r.x1 = std::min(a.x1, b.x1);
    r.y1 = std::min(a.y1, b.y1);
    if (r.x1 < r.x0) r.x1 = r.x0;
    if (r.y1 < r.y0) r.y1 = r.y0;
    return r;
}

struct VideoExtent {
    int num_frames = 0;
    int width = 0;
    int height = 0;

    bool operator==(const VideoExtent&) const = default;
};

inline void validate(const VideoExtent& e) {
    if (e.num_frames < 1 || e.width < 1 || e.height < 1)
        throw std::invalid_argument("video extent must have positive frames, width and height");
}

}  // namespace actdet
