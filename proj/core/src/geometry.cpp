#include "coreshell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace coreshell {

double CoreShellGeometry::measure() const noexcept {
    const int n = dimension_;
    if (kind_ == GeometryKind::interval) return outer_;
    return std::pow(outer_, n) / n;
}

CoreShellGeometry build_geometry(GeometryKind kind, int dimension, double interface,
                                 double outer_extent) {
    if (!(outer_extent > 0.0) || !std::isfinite(outer_extent))
        throw std::invalid_argument("outer_extent must be positive and finite");
    if (!(interface > 0.0) || !(interface < outer_extent))
        throw std::invalid_argument("interface outside domain: need 0 < interface < outer_extent");
    if (kind == GeometryKind::interval && dimension != 1)
        throw std::invalid_argument("interval geometry requires dimension 1, got " +
                                    std::to_string(dimension));
    if (kind == GeometryKind::radial && dimension != 2 && dimension != 3)
        throw std::invalid_argument("radial geometry requires dimension 2 or 3, got " +
                                    std::to_string(dimension));
    return CoreShellGeometry(kind, dimension, interface, outer_extent);
}

double Mesh::max_element_size() const {
    double h = 0.0;
    for (std::size_t e = 0; e < element_count(); ++e) h = std::max(h, element_size(e));
    return h;
}

namespace {

std::size_t subdivisions(double length, double spacing) {
    // Guard against length/spacing landing a hair above an integer.
    const double ratio = length / spacing;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) <= 1e-12 * std::max(1.0, ratio))
        return std::max<std::size_t>(1, static_cast<std::size_t>(rounded));
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ratio)));
}

}  // namespace

Mesh build_mesh_counts(const CoreShellGeometry& geometry, std::size_t core_elements,
                       std::size_t shell_elements) {
    if (core_elements == 0 || shell_elements == 0)
        throw std::invalid_argument("each subdomain needs at least one element");
    const double gamma = geometry.interface_position();
    const double outer = geometry.outer_extent();

    Mesh mesh;
    mesh.weight_exponent = geometry.weight_exponent();
    mesh.dirichlet_left = geometry.kind() == GeometryKind::interval;
    mesh.nodes.reserve(core_elements + shell_elements + 1);
    for (std::size_t i = 0; i < core_elements; ++i)
        mesh.nodes.push_back(gamma * static_cast<double>(i) / static_cast<double>(core_elements));
    mesh.interface_index = mesh.nodes.size();
    mesh.nodes.push_back(gamma);
    for (std::size_t i = 1; i < shell_elements; ++i)
        mesh.nodes.push_back(gamma + (outer - gamma) * static_cast<double>(i) /
                                         static_cast<double>(shell_elements));
    mesh.nodes.push_back(outer);
    return mesh;
}

Mesh build_mesh(const CoreShellGeometry& geometry, double target_spacing) {
    if (!(target_spacing > 0.0)) throw std::invalid_argument("target_spacing must be positive");
    const double gamma = geometry.interface_position();
    return build_mesh_counts(geometry, subdivisions(gamma, target_spacing),
                             subdivisions(geometry.outer_extent() - gamma, target_spacing));
}

Mesh refine(const Mesh& mesh) {
    Mesh out;
    out.weight_exponent = mesh.weight_exponent;
    out.dirichlet_left = mesh.dirichlet_left;
    out.interface_index = 2 * mesh.interface_index;
    out.nodes.reserve(2 * mesh.nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < mesh.nodes.size(); ++i) {
        out.nodes.push_back(mesh.nodes[i]);
        out.nodes.push_back(0.5 * (mesh.nodes[i] + mesh.nodes[i + 1]));
    }
    out.nodes.push_back(mesh.nodes.back());
    return out;
}

}  // namespace coreshell
