#pragma once

#include "flagkit/enumeration.hpp"
#include "flagkit/forms.hpp"

#include <optional>
#include <vector>

namespace flagkit {

/// Type of a flag: the strictly increasing list of dimensions of its proper
/// nonzero spaces.
struct FlagType {
    std::vector<std::size_t> dims;

    std::size_t length() const { return dims.size(); }
    bool operator==(const FlagType&) const = default;

    bool valid_in(std::size_t ambient) const {
        if (dims.empty()) return false;
        std::size_t prev = 0;
        for (auto d : dims) {
            if (d <= prev || d >= ambient) return false;
            prev = d;
        }
        return true;
    }

    bool valid_isotropic_in(std::size_t ambient) const {
        return valid_in(ambient) && dims.back() <= ambient / 2;
    }
};

/// Strictly increasing chain of canonical subspaces of a common ambient space.
template <FieldType F>
class Flag {
public:
    explicit Flag(std::vector<Subspace<F>> spaces) : spaces_(std::move(spaces)) {
        if (spaces_.empty()) throw std::invalid_argument("Flag: empty chain");
        for (std::size_t i = 0; i + 1 < spaces_.size(); ++i) {
            if (spaces_[i].dim() >= spaces_[i + 1].dim() || !spaces_[i + 1].contains(spaces_[i]))
                throw std::invalid_argument("Flag: chain not strictly increasing");
        }
    }

    std::size_t length() const { return spaces_.size(); }
    std::size_t ambient_dim() const { return spaces_.front().ambient_dim(); }
    const F& field() const { return spaces_.front().field(); }
    const std::vector<Subspace<F>>& spaces() const { return spaces_; }

    /// 1-based projection onto the i-th space.
    const Subspace<F>& project(std::size_t i) const {
        if (i < 1 || i > spaces_.size()) throw std::out_of_range("Flag::project: index");
        return spaces_[i - 1];
    }

    FlagType type() const {
        FlagType t;
        for (const auto& s : spaces_) t.dims.push_back(s.dim());
        return t;
    }

    bool operator==(const Flag& other) const { return spaces_ == other.spaces_; }

    bool operator<(const Flag& other) const {
        if (spaces_.size() != other.spaces_.size()) return spaces_.size() < other.spaces_.size();
        for (std::size_t i = 0; i < spaces_.size(); ++i) {
            if (spaces_[i] == other.spaces_[i]) continue;
            return spaces_[i] < other.spaces_[i];
        }
        return false;
    }

private:
    std::vector<Subspace<F>> spaces_;
};

enum class IsoKind { none, orthogonal, symplectic };

inline std::string to_string(IsoKind k) {
    switch (k) {
        case IsoKind::none: return "none";
        case IsoKind::orthogonal: return "orthogonal";
        case IsoKind::symplectic: return "symplectic";
    }
    return "?";
}

enum class ComponentLabel { plus, minus };

/// Component of a maximal isotropic subspace of an even-dimensional
/// orthogonal space, relative to a reference maximal isotropic: two maximal
/// isotropics lie in the same component iff dim(s intersect reference) has
/// the same parity as the maximal dimension.
template <FieldType F>
ComponentLabel max_isotropic_component(const BilinearSpace<F>& b, const Subspace<F>& s,
                                       const Subspace<F>& reference) {
    if (b.kind() != FormKind::symmetric || b.dim() % 2 != 0)
        throw std::invalid_argument("max_isotropic_component: needs even orthogonal space");
    const std::size_t m = b.dim() / 2;
    if (s.dim() != m || !is_isotropic(b, s))
        throw std::invalid_argument("max_isotropic_component: s not maximal isotropic");
    if (reference.dim() != m || !is_isotropic(b, reference))
        throw std::invalid_argument("max_isotropic_component: reference not maximal isotropic");
    const std::size_t codim = m - intersect(s, reference).dim();
    return codim % 2 == 0 ? ComponentLabel::plus : ComponentLabel::minus;
}

/// A finite flag variety: ordinary, orthogonal or symplectic.  For the
/// orthogonal kind with top dimension dim/2 the variety is one of the two
/// components of the maximal isotropic grassmannian; `component_ref` fixes
/// which one.
template <FieldType F>
struct VarietyDescriptor {
    FlagType type;
    std::size_t ambient = 0;
    F field;
    IsoKind iso = IsoKind::none;
    std::optional<BilinearSpace<F>> form;
    std::optional<Subspace<F>> component_ref;

    bool needs_component() const {
        return iso == IsoKind::orthogonal && !type.dims.empty() &&
               ambient % 2 == 0 && type.dims.back() == ambient / 2;
    }

    void validate() const {
        if (iso == IsoKind::none) {
            if (!type.valid_in(ambient))
                throw std::invalid_argument("VarietyDescriptor: invalid flag type");
            if (form) throw std::invalid_argument("VarietyDescriptor: unexpected form");
            return;
        }
        if (!type.valid_isotropic_in(ambient))
            throw std::invalid_argument("VarietyDescriptor: invalid isotropic flag type");
        if (!form) throw std::invalid_argument("VarietyDescriptor: missing bilinear form");
        if (form->dim() != ambient)
            throw std::invalid_argument("VarietyDescriptor: form dimension mismatch");
        if (iso == IsoKind::orthogonal && form->kind() != FormKind::symmetric)
            throw std::invalid_argument("VarietyDescriptor: orthogonal kind needs symmetric form");
        if (iso == IsoKind::symplectic && form->kind() != FormKind::symplectic)
            throw std::invalid_argument("VarietyDescriptor: symplectic kind needs symplectic form");
        if (needs_component()) {
            if (!component_ref)
                throw std::invalid_argument(
                    "VarietyDescriptor: maximal orthogonal grassmannian needs a reference "
                    "component");
            if (component_ref->dim() != ambient / 2 || !is_isotropic(*form, *component_ref))
                throw std::invalid_argument(
                    "VarietyDescriptor: component reference not maximal isotropic");
        }
    }

    bool operator==(const VarietyDescriptor& other) const {
        return type == other.type && ambient == other.ambient && field == other.field &&
               iso == other.iso && form == other.form && component_ref == other.component_ref;
    }
};

/// Membership test: flag has the stated type, lives in the stated ambient
/// space, and satisfies the isotropy/component constraints of the descriptor.
template <FieldType F>
bool contains_flag(const VarietyDescriptor<F>& desc, const Flag<F>& flag) {
    if (!(flag.field() == desc.field) || flag.ambient_dim() != desc.ambient) return false;
    if (!(flag.type() == desc.type)) return false;
    if (desc.iso == IsoKind::none) return true;
    for (const auto& s : flag.spaces())
        if (!is_isotropic(*desc.form, s)) return false;
    if (desc.needs_component()) {
        const auto& top = flag.spaces().back();
        if (max_isotropic_component(*desc.form, top, *desc.component_ref) != ComponentLabel::plus)
            return false;
    }
    return true;
}

/// Exact number of flags of the given ordinary type: a product of
/// Gaussian-binomial fiber counts, saturating at UINT64_MAX.
inline std::uint64_t flag_count(const FlagType& type, std::size_t ambient, std::uint64_t q) {
    std::uint64_t count = 1;
    std::size_t prev = 0;
    for (auto d : type.dims) {
        count = saturating_mul(count, gaussian_binomial(ambient - prev, d - prev, q));
        prev = d;
    }
    return count;
}

namespace detail {

template <FieldType F>
void extend_flag(const VarietyDescriptor<F>& desc, std::vector<Subspace<F>>& partial,
                 std::size_t level, bool& keep_going,
                 const std::function<bool(const Flag<F>&)>& visit) {
    if (!keep_going) return;
    if (level == desc.type.dims.size()) {
        keep_going = visit(Flag<F>(partial));
        return;
    }
    const std::size_t m = desc.type.dims[level];
    auto consider = [&](const Subspace<F>& s) {
        if (!keep_going) return false;
        if (desc.iso != IsoKind::none && !is_isotropic(*desc.form, s)) return true;
        if (level + 1 == desc.type.dims.size() && desc.needs_component() &&
            max_isotropic_component(*desc.form, s, *desc.component_ref) != ComponentLabel::plus)
            return true;
        partial.push_back(s);
        extend_flag(desc, partial, level + 1, keep_going, visit);
        partial.pop_back();
        return keep_going;
    };
    if (level == 0) {
        for_each_subspace<F>(desc.field, desc.ambient, m, consider);
    } else {
        for_each_superspace<F>(partial.back(), m, consider);
    }
}

}  // namespace detail

/// Visits every flag of the variety exactly once, by iterated fiber
/// enumeration (first space, then each superspace in turn), filtering by
/// isotropy where applicable.
template <FieldType F>
void for_each_flag(const VarietyDescriptor<F>& desc, const std::function<bool(const Flag<F>&)>& visit) {
    desc.validate();
    if (desc.iso == IsoKind::orthogonal && desc.field.characteristic() == 2)
        throw std::invalid_argument("for_each_flag: orthogonal enumeration in characteristic 2");
    std::vector<Subspace<F>> partial;
    bool keep_going = true;
    detail::extend_flag(desc, partial, 0, keep_going, visit);
}

/// All flags of the variety, in enumeration order.  The budget is checked
/// against the ordinary-type count, which dominates the isotropic counts.
template <FieldType F>
std::vector<Flag<F>> enumerate_flags(const VarietyDescriptor<F>& desc,
                                     std::uint64_t budget = kDefaultPointBudget) {
    static_assert(F::enumerable, "flag enumeration requires a finite field");
    const std::uint64_t bound = flag_count(desc.type, desc.ambient, desc.field.size());
    if (bound > budget)
        throw BudgetExceeded("enumerate_flags: up to " + std::to_string(bound) +
                             " flags exceed budget " + std::to_string(budget));
    std::vector<Flag<F>> out;
    for_each_flag<F>(desc, [&](const Flag<F>& fl) {
        out.push_back(fl);
        return true;
    });
    return out;
}

/// The unique maximal isotropic space containing `s` within the requested
/// component of an even orthogonal space, where dim(s) = dim/2 - 1.
template <FieldType F>
Subspace<F> theta_map(const BilinearSpace<F>& b, const Subspace<F>& s, ComponentLabel component,
                      const Subspace<F>& reference) {
    if (b.kind() != FormKind::symmetric || b.dim() % 2 != 0)
        throw std::invalid_argument("theta_map: needs even orthogonal space");
    const std::size_t m = b.dim() / 2;
    if (s.dim() + 1 != m || !is_isotropic(b, s))
        throw std::invalid_argument("theta_map: s must be isotropic of dimension dim/2 - 1");

    // Candidates are the isotropic m-spaces between s and its orthogonal
    // complement; enumerate lines of the quotient s^perp / s via lifts.
    std::vector<Subspace<F>> found;
    for_each_superspace<F>(s, m, [&](const Subspace<F>& t) {
        if (is_isotropic(b, t) &&
            max_isotropic_component(b, t, reference) == component)
            found.push_back(t);
        return true;
    });
    if (found.size() != 1)
        throw std::invalid_argument("theta_map: expected exactly one extension in component, got " +
                                    std::to_string(found.size()));
    return found.front();
}

}  // namespace flagkit
