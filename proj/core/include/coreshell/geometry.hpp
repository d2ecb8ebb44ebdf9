#pragma once

#include <cstddef>
#include <vector>

namespace coreshell {

enum class GeometryKind { interval, radial };

/// Core-shell domain reduced to one coordinate.
///
/// The core occupies [0, interface] (closure included), the shell
/// (interface, outer_extent). The outer boundary sits at outer_extent and
/// always carries a homogeneous Dirichlet condition. For the interval the
/// left end x = 0 is a second Dirichlet boundary; for radial domains r = 0 is
/// the symmetry centre and carries a natural (zero-flux) condition.
class CoreShellGeometry {
public:
    GeometryKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return dimension_; }
    double interface_position() const noexcept { return interface_; }
    double outer_extent() const noexcept { return outer_; }

    /// Exponent of the radial volume element r^(N-1).
    int weight_exponent() const noexcept { return dimension_ - 1; }

    /// Weighted measure of the domain, i.e. the integral of r^(N-1) over
    /// [0, outer_extent]. The angular factor is not included, matching the
    /// reduced inner product used everywhere else.
    double measure() const noexcept;

private:
    friend CoreShellGeometry build_geometry(GeometryKind, int, double, double);
    CoreShellGeometry(GeometryKind kind, int dimension, double interface, double outer)
        : kind_(kind), dimension_(dimension), interface_(interface), outer_(outer) {}

    GeometryKind kind_;
    int dimension_;
    double interface_;
    double outer_;
};

/// Throws std::invalid_argument when the parameters violate the
/// 0 < interface < outer_extent ordering or the kind/dimension pairing.
CoreShellGeometry build_geometry(GeometryKind kind, int dimension, double interface,
                                 double outer_extent);

struct Mesh {
    std::vector<double> nodes;
    std::size_t interface_index = 0;
    int weight_exponent = 0;
    /// Dirichlet at x = 0 for intervals; radial meshes are natural there.
    bool dirichlet_left = true;

    std::size_t node_count() const noexcept { return nodes.size(); }
    std::size_t element_count() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
    double interface_position() const { return nodes.at(interface_index); }
    double element_size(std::size_t e) const { return nodes[e + 1] - nodes[e]; }
    double max_element_size() const;

    /// First and one-past-last node carrying an unknown.
    std::size_t first_free() const noexcept { return dirichlet_left ? 1 : 0; }
    std::size_t end_free() const noexcept { return nodes.size() - 1; }
    std::size_t free_count() const noexcept { return end_free() - first_free(); }
};

/// Piecewise-uniform mesh with a node exactly at the interface and element
/// size at most target_spacing in each subdomain.
Mesh build_mesh(const CoreShellGeometry& geometry, double target_spacing);

/// Uniform mesh with the given number of elements per subdomain.
Mesh build_mesh_counts(const CoreShellGeometry& geometry, std::size_t core_elements,
                       std::size_t shell_elements);

/// Bisects every element. The interface node and all old nodes are kept.
Mesh refine(const Mesh& mesh);

}  // namespace coreshell
