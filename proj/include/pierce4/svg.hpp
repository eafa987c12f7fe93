#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "pierce4/geometry.hpp"

namespace pierce4 {

// ---------------------------------------------------------------------------
// Minimal static SVG emission for figures: polygons, infinite lines clipped
// to the scene, and point markers. Geometry y grows upward, so everything is
// written with y negated. The viewBox is the scene bounding box padded by 5%.
// No external resources are referenced.
// ---------------------------------------------------------------------------

class SvgScene {
public:
    void add_polygon(const std::vector<Point2>& verts, const std::string& fill,
                     const std::string& stroke, bool hatched = false) {
        polygons_.push_back({verts, fill, stroke, hatched});
        if (hatched) needs_hatch_ = true;
        for (const auto& v : verts) grow(v);
    }

    void add_polygon(const ConvexPolygon& poly, const std::string& fill,
                     const std::string& stroke, bool hatched = false) {
        add_polygon(poly.vertices(), fill, stroke, hatched);
    }

    void add_line(const Line& line, const std::string& stroke) {
        lines_.push_back({line, stroke});
    }

    void add_point(Point2 p, const std::string& fill) {
        points_.push_back({p, fill});
        grow(p);
    }

    std::string render() const {
        double xlo = xlo_, xhi = xhi_, ylo = ylo_, yhi = yhi_;
        if (!(xlo < xhi)) {
            xlo = -1;
            xhi = 1;
            ylo = -1;
            yhi = 1;
        }
        const double pad = 0.05 * std::max(xhi - xlo, yhi - ylo);
        xlo -= pad;
        xhi += pad;
        ylo -= pad;
        yhi += pad;
        const double scale = (xhi - xlo) / 640.0;  // stroke width in user units

        std::ostringstream os;
        os.precision(10);
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << xlo << " " << -yhi << " "
           << (xhi - xlo) << " " << (yhi - ylo) << "\">\n";
        if (needs_hatch_) {
            const double s = 8.0 * scale;
            os << "  <defs><pattern id=\"hatch\" width=\"" << s << "\" height=\"" << s
               << "\" patternTransform=\"rotate(45)\" patternUnits=\"userSpaceOnUse\">"
               << "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"" << s
               << "\" stroke=\"#999999\" stroke-width=\"" << 2.0 * scale
               << "\"/></pattern></defs>\n";
        }
        for (const auto& pg : polygons_) {
            os << "  <polygon points=\"";
            for (std::size_t i = 0; i < pg.verts.size(); ++i) {
                if (i) os << ' ';
                os << pg.verts[i].x << ',' << -pg.verts[i].y;
            }
            os << "\" fill=\"" << (pg.hatched ? "url(#hatch)" : pg.fill) << "\" stroke=\""
               << pg.stroke << "\" stroke-width=\"" << 1.5 * scale << "\"/>\n";
        }
        for (const auto& ln : lines_) {
            // Clip the infinite line to the padded box through its anchor point.
            const Vec2 d = ln.line.normal.rot90();
            const Point2 p0 = ln.line.normal * ln.line.offset;
            const double reach = std::hypot(xhi - xlo, yhi - ylo);
            const Point2 a = p0 - d * reach, b = p0 + d * reach;
            os << "  <line x1=\"" << a.x << "\" y1=\"" << -a.y << "\" x2=\"" << b.x << "\" y2=\""
               << -b.y << "\" stroke=\"" << ln.stroke << "\" stroke-width=\"" << 2.0 * scale
               << "\"/>\n";
        }
        for (const auto& pt : points_) {
            os << "  <circle cx=\"" << pt.p.x << "\" cy=\"" << -pt.p.y << "\" r=\"" << 4.0 * scale
               << "\" fill=\"" << pt.fill << "\"/>\n";
        }
        os << "</svg>\n";
        return os.str();
    }

private:
    struct Poly {
        std::vector<Point2> verts;
        std::string fill;
        std::string stroke;
        bool hatched;
    };
    struct Ln {
        Line line;
        std::string stroke;
    };
    struct Pt {
        Point2 p;
        std::string fill;
    };

    void grow(Point2 p) {
        xlo_ = std::min(xlo_, p.x);
        xhi_ = std::max(xhi_, p.x);
        ylo_ = std::min(ylo_, p.y);
        yhi_ = std::max(yhi_, p.y);
    }

    std::vector<Poly> polygons_;
    std::vector<Ln> lines_;
    std::vector<Pt> points_;
    bool needs_hatch_ = false;
    double xlo_ = std::numeric_limits<double>::infinity();
    double xhi_ = -std::numeric_limits<double>::infinity();
    double ylo_ = std::numeric_limits<double>::infinity();
    double yhi_ = -std::numeric_limits<double>::infinity();
};

}  // namespace pierce4
