#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamder/linalg.hpp"
#include "hamder/spaces.hpp"

namespace hamder {

using BasisPtr = std::shared_ptr<const SubspaceBasis>;

// Linear map given by the images of an ordered domain basis, images in W
// coordinates. zdeg is set when the map is declared homogeneous.
struct LinearMapOnBasis {
    BasisPtr domain;
    std::vector<VectorField> images;
    std::optional<int> zdeg;
    int parity = 0;
    std::string label;

    std::size_t dim() const noexcept { return images.size(); }
};

LinearMapOnBasis zero_map(BasisPtr domain, std::string label = "0");
LinearMapOnBasis add_maps(const Algebra& alg, const LinearMapOnBasis& a, const LinearMapOnBasis& b);
LinearMapOnBasis scale_map(const Algebra& alg, Scalar c, const LinearMapOnBasis& a);
LinearMapOnBasis sub_maps(const Algebra& alg, const LinearMapOnBasis& a, const LinearMapOnBasis& b);
bool maps_equal(const LinearMapOnBasis& a, const LinearMapOnBasis& b);
bool is_zero_map(const LinearMapOnBasis& a);
// The same map on a sub-basis of its domain.
LinearMapOnBasis restrict_to(const Algebra& alg, const LinearMapOnBasis& d, BasisPtr sub);

class OutsideDomain : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// D(x) for x in the span of the domain; throws OutsideDomain otherwise.
VectorField evaluate(const Algebra& alg, const LinearMapOnBasis& d, const VectorField& x);

// D([x,y]) - [D(x),y] - [x,D(y)].
VectorField leibniz_defect(const Algebra& alg, const LinearMapOnBasis& d, const VectorField& x, const VectorField& y);
VectorField leibniz_defect_basis(const Algebra& alg, const LinearMapOnBasis& d, std::size_t i, std::size_t j);

struct DerivationPolicy {
    enum class Mode { automatic, exhaustive, structured };
    Mode mode = Mode::automatic;
    std::uint64_t seed = 0xC0FFEE;
    std::size_t samples = 1000000;
    int cap = 6;
    std::size_t exhaustive_limit = 1200;
    // Structured mode also pairs these elements with every basis vector.
    std::vector<VectorField> generators;
    // ... and these basis indices with every basis vector.
    std::vector<std::size_t> full_indices;
};

struct PairFailure {
    VectorField x;
    VectorField y;
    VectorField defect;
};

struct DerivationReport {
    bool pass = true;
    std::string mode;
    std::size_t pairs_checked = 0;
    std::size_t low_degree_pairs = 0;
    std::size_t generator_pairs = 0;
    std::size_t full_index_pairs = 0;
    std::size_t sampled_pairs = 0;
    std::optional<PairFailure> failure;
};

DerivationReport is_derivation(const Algebra& alg, const LinearMapOnBasis& d, const DerivationPolicy& policy = {});

LinearMapOnBasis ad(const Algebra& alg, const VectorField& e, BasisPtr domain, std::string label = "ad");

// Homogeneous components keyed by degree; zero components are dropped.
std::map<int, LinearMapOnBasis> graded_components(const Algebra& alg, const LinearMapOnBasis& d);

// Basis of the degree-k derivations L -> V (V given by a basis of a
// subspace of W, images expressed in W coordinates). Every returned map has
// been re-verified on all pairs of L-basis vectors.
std::vector<LinearMapOnBasis> der_space_homogeneous(const Algebra& alg, BasisPtr domain, const SubspaceBasis& codomain,
                                                    int k, std::size_t budget);

// {x in ambient : [x, s] = 0 for all s}, returned as a reduced basis.
enum class CentralizerMethod { automatic, staged, slice_wise };
SubspaceBasis centralizer(const Algebra& alg, const std::vector<VectorField>& s, const SubspaceBasis& ambient,
                          CentralizerMethod method = CentralizerMethod::automatic,
                          CentralizerMethod* used = nullptr);
// Subspace spanned by arbitrary vectors, as a reduced pivot-diagonal basis.
SubspaceBasis span_basis(const Algebra& alg, const std::vector<SparseVec>& vectors, std::uint32_t ambient_dim,
                         const std::string& name);

struct IdealReport {
    bool ideal = true;
    std::size_t pairs_checked = 0;
    std::size_t pairs_skipped = 0;
    std::optional<std::pair<std::size_t, std::size_t>> witness;  // (ambient index, sub index)
};
IdealReport is_ideal(const Algebra& alg, const SubspaceBasis& sub, const SubspaceBasis& amb);

enum class CorrectionStage { minus_one, zero };

struct InnerCorrection {
    VectorField e;
    LinearMapOnBasis corrected;  // D - ad E
};

class CorrectionFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Finds E with (D - ad E) vanishing on the degree -1 slice of the domain
// (minus_one: E in the even W slice of degree zd(D)) or on the degree -1
// and 0 slices (zero: E in the slice of G of degree zd(D)).
InnerCorrection find_inner_correction(const Algebra& alg, const LinearMapOnBasis& d, CorrectionStage stage);

}  // namespace hamder
