#pragma once

#include <array>
#include <string>
#include <vector>

#include "bpc/pythagoras.hpp"

namespace bpc {

enum class Family { T2, T5a, T5b, Saunderson };
std::string family_name(Family f);

// A printed formula whose value disagrees with the value forced by the edges.
struct Discrepancy {
    std::string what;
    Integer printed;
    Integer derived;
};

struct EdgeCuboidRecord {
    Family family = Family::T2;
    ParamPair pair;
    std::array<Integer, 2> integer_edges;
    Integer third_edge_sq;
    // Between the two integer edges, edge 0 with the third edge, edge 1 with the third edge.
    std::array<Integer, 3> face_diagonals;
    Integer main_diagonal;
    std::vector<Discrepancy> discrepancies;
    // third_edge_sq a perfect square would make this a perfect cuboid.
    bool perfect_cuboid = false;
};

struct EulerBrickRecord {
    ParamPair pair;
    std::array<Integer, 3> edges;
    std::array<Integer, 3> face_diagonals;  // (0,1), (0,2), (1,2)
    Integer main_diagonal_sq;
    bool perfect_cuboid = false;
};

struct T3Check {
    Integer e;
    bool identity_ok = false;
    bool e_is_square = false;  // |e| a perfect square
};

// Throws DomainError when the pair violates the family's exact sign condition.
EdgeCuboidRecord t2_family(const ParamPair& pair);
EdgeCuboidRecord t5a_family(const ParamPair& pair);
EdgeCuboidRecord t5b_family(const ParamPair& pair);
EulerBrickRecord saunderson(const ParamPair& pair);
T3Check t3_check(const ParamPair& pair);

// Exact admissibility tests without building the record.
bool t2_admissible(const ParamPair& pair);
bool t5a_admissible(const ParamPair& pair);
bool t5b_admissible(const ParamPair& pair);

} // namespace bpc
