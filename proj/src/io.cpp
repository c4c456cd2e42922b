#include "ifs/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ifs {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Input, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::Input, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::string cloud_csv(const PointCloud& c, const std::vector<std::string>& header_comments) {
    std::string out;
    for (const auto& h : header_comments) out += "# " + h + "\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Eigen::VectorXd p = c.point(i);
        for (int a = 0; a < c.dim(); ++a) {
            if (a) out += ',';
            out += format_double(p[a]);
        }
        out += '\n';
    }
    return out;
}

std::string cloud_ppm(const PointCloud& c, const Box& box, int width, int height) {
    if (c.dim() != 2) throw Error(ErrorKind::Input, "PPM rendering needs a 2D cloud");
    std::string img(static_cast<std::size_t>(width) * height * 3, static_cast<char>(0xff));
    auto paint = [&](int px, int py) {
        if (px < 0 || px >= width || py < 0 || py >= height) return;
        const std::size_t at = (static_cast<std::size_t>(py) * width + px) * 3;
        img[at] = img[at + 1] = img[at + 2] = 0;
    };
    const double wx = box.hi[0] - box.lo[0];
    const double wy = box.hi[1] - box.lo[1];
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Eigen::VectorXd p = c.point(i);
        const int px = static_cast<int>(std::lround((p[0] - box.lo[0]) / wx * (width - 1)));
        const int py = static_cast<int>(std::lround((box.hi[1] - p[1]) / wy * (height - 1)));
        paint(px, py);
        paint(px - 1, py);
        paint(px + 1, py);
        paint(px, py - 1);
        paint(px, py + 1);
    }
    std::string out = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out += img;
    return out;
}

std::string cloud_svg(const PointCloud& c, const Box& box) {
    if (c.dim() != 2) throw Error(ErrorKind::Input, "SVG rendering needs a 2D cloud");
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    out += format_double(box.lo[0]) + " " + format_double(box.lo[1]) + " " +
           format_double(box.hi[0] - box.lo[0]) + " " + format_double(box.hi[1] - box.lo[1]) +
           "\">\n";
    const std::string r = format_double(c.eps());
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Eigen::VectorXd p = c.point(i);
        // flip y so the image is in the usual orientation
        out += "<circle cx=\"" + format_double(p[0]) + "\" cy=\"" +
               format_double(box.hi[1] + box.lo[1] - p[1]) + "\" r=\"" + r + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string json_dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace ifs
