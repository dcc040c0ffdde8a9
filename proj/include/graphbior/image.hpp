#pragma once

#include "graphbior/bipartite.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace graphbior {

// Grayscale image, row-major, values nominally in [0, maxval].
struct Image {
    int width = 0, height = 0;
    int maxval = 255;
    std::vector<double> pixels;

    double at(int r, int c) const { return pixels[static_cast<size_t>(r * width + c)]; }
    LatticeShape shape() const { return {width, height}; }
};

Image read_pgm(const std::filesystem::path& path);
Image parse_pgm(const std::string& bytes, const std::string& source = "<pgm>");
// P5 when binary, else P2; values rounded and clamped to [0, maxval]
std::string pgm_to_string(const Image& img, bool binary = true);
void write_pgm(const std::filesystem::path& path, const Image& img, bool binary = true);

// Edge pixels from the gradient detector (central differences, |g| > threshold),
// minus 8-connected components smaller than min_component.
std::vector<bool> detect_edges(const Image& img, double threshold, int min_component);

// Edge pixels from a map where 0 marks an edge.
std::vector<bool> edges_from_map(const Image& edge_map);

// Mask every link whose two pixels are edge pixels and whose direction lies
// within 67.5 degrees of the local gradient.
LinkMask mask_from_edges(const Image& img, const std::vector<bool>& edge);

LinkMask edge_aware_mask(const Image& img, double threshold, int min_component);

} // namespace graphbior
