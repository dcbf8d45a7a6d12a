#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Structured description of a generated sample space. Two external forms:
// a compact CLI string ("sphere:r=1,n=25,seed=7") and a JSON document with
// the same fields; both round-trip through this struct.

namespace cbb {

struct GraphEdge {
    std::string from, to;
    double weight = 1.0;
};

struct SpaceSpec {
    // euclidean | sphere | hemisphere | hyperbolic | cone | tripod | graph
    std::string type = "euclidean";
    double radius = 1.0;       // sphere radius, or sampling-disk radius
    double total_angle = 0.0;  // cone apex angle (required for cones)
    int n = 0;                 // number of random points
    uint64_t seed = 0;
    bool incomplete = false;   // variant: incomplete (open hemisphere, apexless cone, punctured disk)
    bool canonical = false;    // prepend the backend's canonical landmark points
    double min_sep = 0.0;      // rejection-sampling separation floor
    int leg_points = 4;        // tripod: sample points per leg
    double leg_length = 1.0;   // tripod: leg length
    std::vector<GraphEdge> edges;  // graph backend

    // Compact form: "type:key=val,..."; flags appear bare ("incomplete").
    std::string to_string() const;
    static SpaceSpec parse(const std::string& text);
};

}  // namespace cbb
