#include "graphbior/image.hpp"
#include "graphbior/error.hpp"
#include "graphbior/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace graphbior {

namespace {

struct Gradient {
    double gx = 0, gy = 0;
};

std::vector<Gradient> gradients(const Image& img)
{
    const int W = img.width, H = img.height;
    std::vector<Gradient> g(static_cast<size_t>(W * H));
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c) {
            int cl = std::max(c - 1, 0), cr = std::min(c + 1, W - 1);
            int ru = std::max(r - 1, 0), rd = std::min(r + 1, H - 1);
            auto& v = g[static_cast<size_t>(r * W + c)];
            v.gx = img.at(r, cr) - img.at(r, cl);
            v.gy = img.at(rd, c) - img.at(ru, c);
        }
    return g;
}

} // namespace

Image parse_pgm(const std::string& bytes, const std::string& source)
{
    size_t pos = 0;
    auto skip = [&] {
        while (pos < bytes.size()) {
            if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else {
                break;
            }
        }
    };
    bool in_data = false;
    auto number = [&]() -> long {
        skip();
        size_t start = pos;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos])))
            ++pos;
        if (start == pos)
            throw ValidationError(source + (in_data ? ": malformed PGM data" : ": malformed PGM header"));
        return std::stol(bytes.substr(start, pos - start));
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
        throw ValidationError(source + ": not a P2/P5 PGM file");
    const bool binary = bytes[1] == '5';
    pos = 2;
    Image img;
    img.width = static_cast<int>(number());
    img.height = static_cast<int>(number());
    img.maxval = static_cast<int>(number());
    if (img.width <= 0 || img.height <= 0 || img.maxval <= 0 || img.maxval > 255)
        throw ValidationError(source + ": unsupported PGM dimensions or depth");
    const size_t n = static_cast<size_t>(img.width) * img.height;
    img.pixels.resize(n);
    if (binary) {
        ++pos; // single whitespace after maxval
        if (bytes.size() < pos + n)
            throw ValidationError(source + ": truncated PGM data");
        for (size_t i = 0; i < n; ++i)
            img.pixels[i] = static_cast<unsigned char>(bytes[pos + i]);
    } else {
        in_data = true;
        for (size_t i = 0; i < n; ++i) {
            skip();
            if (pos >= bytes.size())
                throw ValidationError(source + ": truncated PGM data");
            img.pixels[i] = static_cast<double>(number());
        }
    }
    return img;
}

Image read_pgm(const std::filesystem::path& path)
{
    return parse_pgm(read_file(path), path.string());
}

std::string pgm_to_string(const Image& img, bool binary)
{
    std::string out = (binary ? "P5\n" : "P2\n") + std::to_string(img.width) + " " +
                      std::to_string(img.height) + "\n" + std::to_string(img.maxval) + "\n";
    auto q = [&](double v) {
        double r = std::round(v);
        return static_cast<int>(std::clamp(r, 0.0, static_cast<double>(img.maxval)));
    };
    if (binary) {
        for (double v : img.pixels)
            out.push_back(static_cast<char>(static_cast<unsigned char>(q(v))));
    } else {
        for (int r = 0; r < img.height; ++r) {
            for (int c = 0; c < img.width; ++c) {
                if (c)
                    out += ' ';
                out += std::to_string(q(img.at(r, c)));
            }
            out += '\n';
        }
    }
    return out;
}

void write_pgm(const std::filesystem::path& path, const Image& img, bool binary)
{
    write_file_atomic(path, pgm_to_string(img, binary));
}

std::vector<bool> detect_edges(const Image& img, double threshold, int min_component)
{
    const int W = img.width, H = img.height;
    auto g = gradients(img);
    std::vector<bool> edge(static_cast<size_t>(W * H), false);
    for (size_t i = 0; i < edge.size(); ++i)
        edge[i] = std::hypot(g[i].gx, g[i].gy) > threshold;

    // drop small 8-connected components
    std::vector<int> comp(edge.size(), -1);
    std::vector<int> stack, members;
    for (int s = 0; s < W * H; ++s) {
        if (!edge[static_cast<size_t>(s)] || comp[static_cast<size_t>(s)] >= 0)
            continue;
        members.clear();
        stack.push_back(s);
        comp[static_cast<size_t>(s)] = s;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            members.push_back(u);
            int r = u / W, c = u % W;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if ((dr || dc) && rr >= 0 && rr < H && cc >= 0 && cc < W) {
                        auto v = static_cast<size_t>(rr * W + cc);
                        if (edge[v] && comp[v] < 0) {
                            comp[v] = s;
                            stack.push_back(static_cast<int>(v));
                        }
                    }
                }
        }
        if (static_cast<int>(members.size()) < min_component)
            for (int u : members)
                edge[static_cast<size_t>(u)] = false;
    }
    return edge;
}

std::vector<bool> edges_from_map(const Image& edge_map)
{
    std::vector<bool> e(edge_map.pixels.size());
    for (size_t i = 0; i < e.size(); ++i)
        e[i] = edge_map.pixels[i] == 0.0;
    return e;
}

LinkMask mask_from_edges(const Image& img, const std::vector<bool>& edge)
{
    const int W = img.width, H = img.height;
    if (edge.size() != static_cast<size_t>(W * H))
        throw ValidationError("edge map size does not match image");
    auto g = gradients(img);
    const double cos_limit = std::cos(67.5 * std::numbers::pi / 180.0);
    LinkMask mask;
    mask.shape = {W, H};
    const int offs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c) {
            const int a = r * W + c;
            if (!edge[static_cast<size_t>(a)])
                continue;
            for (const auto& o : offs) {
                const int rr = r + o[0], cc = c + o[1];
                if (rr >= H || cc < 0 || cc >= W)
                    continue;
                const int b = rr * W + cc;
                if (!edge[static_cast<size_t>(b)])
                    continue;
                const double gx = g[static_cast<size_t>(a)].gx + g[static_cast<size_t>(b)].gx;
                const double gy = g[static_cast<size_t>(a)].gy + g[static_cast<size_t>(b)].gy;
                const double gn = std::hypot(gx, gy);
                const double dn = std::hypot(o[0], o[1]);
                // no usable direction: cut the link
                if (gn == 0.0 || std::fabs(gx * o[1] + gy * o[0]) >= cos_limit * gn * dn)
                    mask.add(a, b);
            }
        }
    mask.finalize();
    return mask;
}

LinkMask edge_aware_mask(const Image& img, double threshold, int min_component)
{
    return mask_from_edges(img, detect_edges(img, threshold, min_component));
}

} // namespace graphbior
