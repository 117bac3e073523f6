#include "shapect/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "shapect/error.hpp"

namespace shapect::io {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(path, mode);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    return f;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream f(path, mode);
    if (!f) throw Error("cannot open '" + path + "' for reading");
    return f;
}

} // namespace

void write_pgm(const std::string& path, const RasterImage& img, double white_level) {
    double peak = white_level;
    if (peak <= 0.0)
        for (double v : img.values) peak = std::max(peak, v);
    if (peak <= 0.0) peak = 1.0;

    std::ofstream f = open_out(path);
    f << "P2\n" << img.side << " " << img.side << "\n255\n";
    for (int i = 0; i < img.side; ++i) {
        for (int j = 0; j < img.side; ++j) {
            const int g = std::clamp(static_cast<int>(std::lround(img.at(i, j) / peak * 255.0)), 0, 255);
            f << g << (j + 1 == img.side ? '\n' : ' ');
        }
    }
}

void write_image_csv(const std::string& path, const RasterImage& img) {
    std::ofstream f = open_out(path);
    f << std::setprecision(17);
    for (int i = 0; i < img.side; ++i) {
        for (int j = 0; j < img.side; ++j)
            f << img.at(i, j) << (j + 1 == img.side ? '\n' : ',');
    }
}

RasterImage read_image_csv(const std::string& path) {
    std::ifstream f = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error("read_image_csv: '" + path + "' is empty");
    const std::size_t n = rows.size();
    RasterImage img = RasterImage::zeros(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw Error("read_image_csv: '" + path + "' is not square");
        for (std::size_t j = 0; j < n; ++j) img.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return img;
}

void write_sinogram_csv(const std::string& path, const Sinogram& s) {
    std::ofstream f = open_out(path);
    f << std::setprecision(17);
    f << s.views << "," << s.bins << "\n";
    for (int v = 0; v < s.views; ++v)
        for (int b = 0; b < s.bins; ++b)
            f << s.at(v, b) << (b + 1 == s.bins ? '\n' : ',');
}

Sinogram read_sinogram_csv(const std::string& path) {
    std::ifstream f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw Error("read_sinogram_csv: '" + path + "' is empty");
    int views = 0, bins = 0;
    if (std::sscanf(line.c_str(), "%d,%d", &views, &bins) != 2)
        throw Error("read_sinogram_csv: bad header in '" + path + "'");
    Sinogram s = Sinogram::zeros(views, bins);
    for (int v = 0; v < views; ++v) {
        if (!std::getline(f, line)) throw Error("read_sinogram_csv: truncated file '" + path + "'");
        std::stringstream ss(line);
        std::string cell;
        for (int b = 0; b < bins; ++b) {
            if (!std::getline(ss, cell, ',')) throw Error("read_sinogram_csv: short row in '" + path + "'");
            s.at(v, b) = std::stod(cell);
        }
    }
    return s;
}

void write_sinogram_bin(const std::string& path, const Sinogram& s) {
    std::ofstream f = open_out(path, std::ios::binary);
    const char magic[4] = {'S', 'I', 'N', 'O'};
    const std::uint32_t views = static_cast<std::uint32_t>(s.views);
    const std::uint32_t bins = static_cast<std::uint32_t>(s.bins);
    const std::uint32_t reserved = 0;
    f.write(magic, 4);
    f.write(reinterpret_cast<const char*>(&views), 4);
    f.write(reinterpret_cast<const char*>(&bins), 4);
    f.write(reinterpret_cast<const char*>(&reserved), 4);
    f.write(reinterpret_cast<const char*>(s.values.data()),
            static_cast<std::streamsize>(s.values.size() * sizeof(double)));
}

Sinogram read_sinogram_bin(const std::string& path) {
    std::ifstream f = open_in(path, std::ios::binary);
    char magic[4];
    std::uint32_t views = 0, bins = 0, reserved = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&views), 4);
    f.read(reinterpret_cast<char*>(&bins), 4);
    f.read(reinterpret_cast<char*>(&reserved), 4);
    if (!f || std::memcmp(magic, "SINO", 4) != 0)
        throw Error("read_sinogram_bin: '" + path + "' is not a SINO file");
    Sinogram s = Sinogram::zeros(static_cast<int>(views), static_cast<int>(bins));
    f.read(reinterpret_cast<char*>(s.values.data()),
           static_cast<std::streamsize>(s.values.size() * sizeof(double)));
    if (!f) throw Error("read_sinogram_bin: truncated file '" + path + "'");
    return s;
}

void write_svg(const std::string& path, const std::vector<Vec2>& polyline, double side) {
    if (polyline.size() < 3) throw Error("write_svg: need at least 3 points");
    std::ofstream f = open_out(path);
    f << std::setprecision(10);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\"" << side
      << "\" viewBox=\"0 0 " << side << " " << side << "\">\n";
    f << "  <path d=\"";
    for (std::size_t i = 0; i < polyline.size(); ++i) {
        f << (i == 0 ? "M " : "L ") << polyline[i].x << " " << side - polyline[i].y << " ";
    }
    f << "Z\" fill=\"none\" stroke=\"black\" stroke-width=\"" << side / 512.0 << "\"/>\n";
    f << "</svg>\n";
}

void append_chain_csv(const std::string& path, const Chain& chain, std::int64_t from_iteration) {
    const bool fresh = from_iteration == 0;
    std::ofstream f = open_out(path, fresh ? std::ios::out : std::ios::app);
    f << std::setprecision(17);
    if (fresh) {
        f << "iteration";
        for (int i = 0; i < chain.dimension(); ++i) f << ",v" << i;
        f << ",log_post,accepted_stage\n";
    }
    for (std::size_t k = static_cast<std::size_t>(from_iteration); k < chain.size(); ++k) {
        f << k;
        for (double v : chain.samples[k]) f << "," << v;
        f << "," << chain.log_posts[k] << "," << chain.accepted_stage[k] << "\n";
    }
}

Chain read_chain_csv(const std::string& path) {
    std::ifstream f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw Error("read_chain_csv: '" + path + "' is empty");
    Chain chain;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> fields;
        while (std::getline(ss, cell, ',')) fields.push_back(std::stod(cell));
        if (fields.size() < 4) throw Error("read_chain_csv: short row in '" + path + "'");
        chain.samples.emplace_back(fields.begin() + 1, fields.end() - 2);
        chain.log_posts.push_back(fields[fields.size() - 2]);
        chain.accepted_stage.push_back(static_cast<int>(fields.back()));
    }
    return chain;
}

void write_histogram_csv(const std::string& path, const std::vector<double>& values, int bins) {
    if (values.empty() || bins < 1) throw Error("write_histogram_csv: empty input");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    double lo = *mn_it, hi = *mx_it;
    if (lo == hi) hi = lo + 1.0;
    std::vector<std::int64_t> count(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++count[static_cast<std::size_t>(b)];
    }
    std::ofstream f = open_out(path);
    f << std::setprecision(17);
    f << "bin_center,count\n";
    for (int b = 0; b < bins; ++b)
        f << lo + (b + 0.5) * (hi - lo) / bins << "," << count[static_cast<std::size_t>(b)] << "\n";
}

void write_trace_csv(const std::string& path, const std::vector<double>& values, int thin) {
    if (thin < 1) throw Error("write_trace_csv: thin must be >= 1");
    std::ofstream f = open_out(path);
    f << std::setprecision(17);
    f << "iteration,value\n";
    for (std::size_t i = 0; i < values.size(); i += static_cast<std::size_t>(thin))
        f << i << "," << values[i] << "\n";
}

namespace {

void draw_line(std::vector<std::uint8_t>& pix, int w, int h, int x0, int y0, int x1, int y1) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (x0 >= 0 && x0 < w && y0 >= 0 && y0 < h) pix[static_cast<std::size_t>(y0) * w + x0] = 0;
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) { err += dy; x0 += sx; }
        if (e2 <= dx) { err += dx; y0 += sy; }
    }
}

void write_bitmap_pgm(const std::string& path, const std::vector<std::uint8_t>& pix, int w, int h) {
    std::ofstream f = open_out(path);
    f << "P2\n" << w << " " << h << "\n255\n";
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            f << static_cast<int>(pix[static_cast<std::size_t>(y) * w + x]) << (x + 1 == w ? '\n' : ' ');
}

} // namespace

void write_trace_pgm(const std::string& path, const std::vector<double>& values, int width, int height) {
    if (values.empty()) throw Error("write_trace_pgm: empty input");
    std::vector<std::uint8_t> pix(static_cast<std::size_t>(width) * height, 255);
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    double lo = *mn_it, hi = *mx_it;
    if (lo == hi) hi = lo + 1.0;
    const std::size_t n = values.size();
    int px = 0;
    int py = height - 1 - static_cast<int>((values[0] - lo) / (hi - lo) * (height - 1));
    for (std::size_t i = 1; i < n; ++i) {
        const int x = static_cast<int>(static_cast<double>(i) / static_cast<double>(n - 1) * (width - 1));
        const int y = height - 1 - static_cast<int>((values[i] - lo) / (hi - lo) * (height - 1));
        draw_line(pix, width, height, px, py, x, y);
        px = x;
        py = y;
    }
    write_bitmap_pgm(path, pix, width, height);
}

void write_histogram_pgm(const std::string& path, const std::vector<double>& values, int bins,
                         int width, int height) {
    if (values.empty() || bins < 1) throw Error("write_histogram_pgm: empty input");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    double lo = *mn_it, hi = *mx_it;
    if (lo == hi) hi = lo + 1.0;
    std::vector<std::int64_t> count(static_cast<std::size_t>(bins), 0);
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++count[static_cast<std::size_t>(b)];
    }
    const std::int64_t peak = *std::max_element(count.begin(), count.end());
    std::vector<std::uint8_t> pix(static_cast<std::size_t>(width) * height, 255);
    for (int b = 0; b < bins; ++b) {
        const int x0 = b * width / bins;
        const int x1 = (b + 1) * width / bins;
        const int bar = static_cast<int>(static_cast<double>(count[static_cast<std::size_t>(b)]) /
                                         static_cast<double>(peak) * (height - 1));
        for (int x = x0; x < x1; ++x)
            for (int y = height - bar; y < height; ++y)
                pix[static_cast<std::size_t>(y) * width + x] = 128;
    }
    write_bitmap_pgm(path, pix, width, height);
}

} // namespace shapect::io
