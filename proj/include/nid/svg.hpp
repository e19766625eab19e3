#pragma once

#include <string>
#include <vector>

namespace nid::svg {

std::string escape(const std::string& text);

class Canvas {
public:
    Canvas(double width, double height);

    void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke = "none");
    void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1,
              const std::string& dash = "");
    void circle(double cx, double cy, double r, const std::string& fill, double opacity = 1);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width = 1.5);
    void text(double x, double y, const std::string& s, double size = 11, const std::string& anchor = "start",
              const std::string& fill = "#222", const std::string& cls = "");
    void vtext(double x, double y, const std::string& s, double size = 10); // rotated a quarter turn
    std::string str() const;

private:
    double width_, height_;
    std::string body_;
};

// Maps data coordinates to a pixel box.
struct Frame {
    double x0, y0, w, h; // pixel box
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

// Box, ticks and labels; pads degenerate ranges.
Frame axes(Canvas& c, double x0, double y0, double w, double h, double xmin, double xmax, double ymin, double ymax,
           const std::string& title, const std::string& xlabel, const std::string& ylabel);

} // namespace nid::svg
