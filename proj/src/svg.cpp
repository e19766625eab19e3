#include "nid/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nid::svg {

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v, double step)
{
    const int decimals = std::max(0, -static_cast<int>(std::floor(std::log10(step) + 1e-9)));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, std::abs(v) < step * 1e-6 ? 0.0 : v);
    return buf;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals.
double nice_step(double span, int target)
{
    const double raw = span / target, mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return (r < 1.5 ? 1 : r < 3.5 ? 2 : r < 7.5 ? 5 : 10) * mag;
}

} // namespace

std::string escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

Canvas::Canvas(double width, double height) : width_(width), height_(height) {}

void Canvas::rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke)
{
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

void Canvas::line(double x1, double y1, double x2, double y2, const std::string& stroke, double width,
                  const std::string& dash)
{
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"";
    if (!dash.empty())
        body_ += " stroke-dasharray=\"" + dash + "\"";
    body_ += "/>\n";
}

void Canvas::circle(double cx, double cy, double r, const std::string& fill, double opacity)
{
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" + fill +
             "\" fill-opacity=\"" + num(opacity) + "\"/>\n";
}

void Canvas::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width)
{
    if (pts.size() < 2)
        return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
        body_ += (i ? " " : "") + num(pts[i].first) + "," + num(pts[i].second);
    body_ += "\"/>\n";
}

void Canvas::vtext(double x, double y, const std::string& s, double size)
{
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
             "\" text-anchor=\"middle\" fill=\"#222\" transform=\"rotate(-90 " + num(x) + " " + num(y) + ")\">" +
             escape(s) + "</text>\n";
}

void Canvas::text(double x, double y, const std::string& s, double size, const std::string& anchor,
                  const std::string& fill, const std::string& cls)
{
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) + "\" text-anchor=\"" +
             anchor + "\" fill=\"" + fill + "\"";
    if (!cls.empty())
        body_ += " class=\"" + cls + "\"";
    body_ += ">" + escape(s) + "</text>\n";
}

std::string Canvas::str() const
{
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) +
           "\" font-family=\"Helvetica, Arial, sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
           body_ + "</svg>\n";
}

Frame axes(Canvas& c, double x0, double y0, double w, double h, double xmin, double xmax, double ymin, double ymax,
           const std::string& title, const std::string& xlabel, const std::string& ylabel)
{
    auto pad = [](double& lo, double& hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            lo = 0;
            hi = 1;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        double m = 0.04 * (hi - lo);
        lo -= m;
        hi += m;
    };
    pad(xmin, xmax);
    pad(ymin, ymax);
    const double xs = nice_step(xmax - xmin, 6), ys = nice_step(ymax - ymin, 4);
    Frame f{x0, y0, w, h, xmin, xmax, ymin, ymax};
    c.rect(x0, y0, w, h, "none", "#444");
    for (double v = std::ceil(xmin / xs) * xs; v <= xmax + xs * 1e-9; v += xs) {
        c.line(f.px(v), y0 + h, f.px(v), y0 + h + 4, "#444");
        c.text(f.px(v), y0 + h + 15, tick(v, xs), 9, "middle");
    }
    for (double v = std::ceil(ymin / ys) * ys; v <= ymax + ys * 1e-9; v += ys) {
        c.line(x0 - 4, f.py(v), x0, f.py(v), "#444");
        c.text(x0 - 6, f.py(v) + 3, tick(v, ys), 9, "end");
    }
    c.text(x0, y0 - 6, title, 12, "start", "#111");
    c.text(x0 + w / 2, y0 + h + 30, xlabel, 10, "middle");
    c.vtext(x0 - 48, y0 + h / 2, ylabel, 10);
    return f;
}

} // namespace nid::svg
