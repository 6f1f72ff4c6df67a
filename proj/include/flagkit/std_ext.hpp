#pragma once

#include "flagkit/flag.hpp"

#include <string>
#include <vector>

namespace flagkit {

enum class StdExtVariant { strict, modified };

inline std::string to_string(StdExtVariant v) {
    return v == StdExtVariant::strict ? "strict" : "modified";
}

/// Descriptor of the dual flag variety: types n_j are replaced by
/// ambient - n_j in reversed order, over the same concrete coordinate space
/// (identified with its dual via the standard pairing).
template <FieldType F>
VarietyDescriptor<F> dual_descriptor(const VarietyDescriptor<F>& d) {
    if (d.iso != IsoKind::none)
        throw std::invalid_argument("dual_descriptor: duality only for ordinary flag varieties");
    VarietyDescriptor<F> out = d;
    out.type.dims.clear();
    for (auto it = d.type.dims.rbegin(); it != d.type.dims.rend(); ++it)
        out.type.dims.push_back(d.ambient - *it);
    return out;
}

/// The flag of annihilators in reversed order.
template <FieldType F>
Flag<F> dual_flag(const Flag<F>& fl) {
    std::vector<Subspace<F>> spaces;
    for (auto it = fl.spaces().rbegin(); it != fl.spaces().rend(); ++it)
        spaces.push_back(annihilator(*it));
    return Flag<F>(std::move(spaces));
}

/// Standard-extension datum.  The fields u_chain / eps / pbar always describe
/// a strict map; for the modified variant that strict core maps into the dual
/// of `target` and the embedding itself post-composes with the duality
/// isomorphism (flag of annihilators).
///
/// eps[i] is the matrix of the operator U_{i+1} -> V with respect to the
/// canonical basis of u_chain[i] and the standard basis of the source ambient
/// space; the all-zero matrix encodes the zero operator.  pbar has length
/// k~ + 2 with pbar[0] = 0 and pbar[k~+1] = k + 1.
template <FieldType F>
struct StdExtSpec {
    StdExtVariant variant = StdExtVariant::strict;
    VarietyDescriptor<F> source;
    VarietyDescriptor<F> target;
    std::vector<Subspace<F>> u_chain;
    std::vector<Matrix<F>> eps;
    std::vector<std::size_t> pbar;

    std::size_t k_source() const { return source.type.dims.size(); }
    std::size_t k_target() const { return u_chain.size(); }

    /// Variety the strict core maps into.
    VarietyDescriptor<F> core_target() const {
        return variant == StdExtVariant::strict ? target : dual_descriptor(target);
    }
};

namespace detail {

/// Coefficients expressing each row of `rows` (ambient vectors lying in u)
/// in the canonical basis of u.  Throws if some row is outside u.
template <FieldType F>
Matrix<F> coords_in(const Subspace<F>& u, const Matrix<F>& rows) {
    const F& f = u.field();
    Matrix<F> coeffs(f, rows.rows(), u.dim());
    const Matrix<F> ut = u.basis().transpose();
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        auto c = solve(ut, rows.row(i));
        if (!c) throw std::invalid_argument("coords_in: vector outside the subspace");
        coeffs.set_row(i, *c);
    }
    return coeffs;
}

/// The subspace of the source ambient space selected by a pbar value:
/// 0 -> 0, k+1 -> V, otherwise the matching flag space.
template <FieldType F>
Subspace<F> pbar_space(const VarietyDescriptor<F>& source, const Flag<F>& fl, std::size_t idx) {
    const std::size_t k = source.type.dims.size();
    if (idx == 0) return Subspace<F>::zero(source.field, source.ambient);
    if (idx == k + 1) return Subspace<F>::full(source.field, source.ambient);
    return fl.project(idx);
}

/// eps-preimage of `s` pushed into the ambient space of u:
/// { x in u : eps(x) in s }.
template <FieldType F>
Subspace<F> eps_preimage(const Subspace<F>& u, const Matrix<F>& eps, const Subspace<F>& s) {
    const Subspace<F> local = preimage(LinearMap<F>{eps}, s);
    return Subspace<F>::span(local.basis().mul(u.basis()));
}

}  // namespace detail

/// Image flag of the strict core: j-th space is the eps_j-preimage of the
/// pbar(j)-th source space.
template <FieldType F>
Flag<F> apply_strict_core(const StdExtSpec<F>& spec, const Flag<F>& fl) {
    std::vector<Subspace<F>> spaces;
    for (std::size_t j = 0; j < spec.k_target(); ++j) {
        const auto middle = detail::pbar_space(spec.source, fl, spec.pbar[j + 1]);
        spaces.push_back(detail::eps_preimage(spec.u_chain[j], spec.eps[j], middle));
    }
    return Flag<F>(std::move(spaces));
}

/// Evaluate the embedding on a source flag.
template <FieldType F>
Flag<F> apply(const StdExtSpec<F>& spec, const Flag<F>& fl) {
    if (!contains_flag(spec.source, fl))
        throw std::invalid_argument("apply: flag not in the source variety");
    Flag<F> core = apply_strict_core(spec, fl);
    return spec.variant == StdExtVariant::strict ? core : dual_flag(core);
}

// ---------------------------------------------------------------------------
// Construction from the direct-sum presentation
// ---------------------------------------------------------------------------

/// Direct-sum presentation of a strict extension: an embedding of the source
/// ambient space into the target one, a complement w_hat with a chain of
/// subspaces inside it, and the stage map pbar.  The resulting datum sends a
/// flag to ( iota(V_pbar(j)) + W_j )_j, with W_j alone at pbar(j) = 0 and
/// iota(V) + W_j at pbar(j) = k + 1.
template <FieldType F>
struct NaiveStdExt {
    VarietyDescriptor<F> source;
    VarietyDescriptor<F> target;  // variety of the strict map itself
    Matrix<F> v_embedding;        // target_ambient x source_ambient, injective
    Subspace<F> w_hat;
    std::vector<Subspace<F>> w_chain;
    std::vector<std::size_t> pbar;
};

template <FieldType F>
Subspace<F> map_subspace(const Matrix<F>& emb, const Subspace<F>& s) {
    return Subspace<F>::span(s.basis().mul(emb.transpose()));
}

template <FieldType F>
StdExtSpec<F> make_strict(const NaiveStdExt<F>& naive) {
    naive.source.validate();
    naive.target.validate();
    const F& f = naive.source.field;
    const std::size_t nv = naive.source.ambient;
    const std::size_t nt = naive.target.ambient;
    const std::size_t k = naive.source.type.dims.size();
    const std::size_t kt = naive.target.type.dims.size();

    if (naive.v_embedding.rows() != nt || naive.v_embedding.cols() != nv)
        throw std::invalid_argument("make_strict: embedding has wrong shape");
    if (rank(naive.v_embedding) != nv)
        throw std::invalid_argument("make_strict: embedding not injective");
    if (naive.w_chain.size() != kt)
        throw std::invalid_argument("make_strict: w_chain length must match target type");
    if (naive.pbar.size() != kt + 2)
        throw std::invalid_argument("make_strict: pbar must have length k~ + 2");

    const Subspace<F> vimg = Subspace<F>::span(naive.v_embedding.transpose());
    if (naive.w_hat.dim() + nv != nt || !intersect(vimg, naive.w_hat).is_zero())
        throw std::invalid_argument("make_strict: w_hat is not a complement of the embedded source");
    for (std::size_t i = 0; i < kt; ++i) {
        if (!naive.w_hat.contains(naive.w_chain[i]))
            throw std::invalid_argument("make_strict: w_chain[" + std::to_string(i) +
                                        "] not inside w_hat");
        if (i > 0 && !naive.w_chain[i].contains(naive.w_chain[i - 1]))
            throw std::invalid_argument("make_strict: w_chain not increasing at index " +
                                        std::to_string(i));
    }

    // Projection onto the embedded source along w_hat, in source coordinates.
    Matrix<F> basis_change = naive.v_embedding.hstack(naive.w_hat.basis().transpose());
    Matrix<F> inv = inverse(basis_change);
    std::vector<std::size_t> top(nv);
    for (std::size_t i = 0; i < nv; ++i) top[i] = i;
    Matrix<F> proj = inv.transpose().columns(top).transpose();  // nv x nt

    StdExtSpec<F> spec;
    spec.variant = StdExtVariant::strict;
    spec.source = naive.source;
    spec.target = naive.target;
    spec.pbar = naive.pbar;
    for (std::size_t i = 0; i < kt; ++i) {
        const std::size_t stage = naive.pbar[i + 1];
        if (stage == 0) {
            spec.u_chain.push_back(naive.w_chain[i]);
            spec.eps.emplace_back(f, nv, naive.w_chain[i].dim());
        } else {
            Subspace<F> u = sum(vimg, naive.w_chain[i]);
            spec.eps.push_back(proj.mul(u.basis().transpose()));
            spec.u_chain.push_back(std::move(u));
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationReport {
    std::vector<std::string> violations;
    bool not_linear_exception = false;

    bool ok() const { return violations.empty(); }
};

template <FieldType F>
ValidationReport validate(const StdExtSpec<F>& spec) {
    ValidationReport rep;
    auto fail = [&](const std::string& msg) { rep.violations.push_back(msg); };

    try {
        spec.source.validate();
    } catch (const std::exception& e) {
        fail(std::string("source descriptor: ") + e.what());
        return rep;
    }
    try {
        spec.target.validate();
    } catch (const std::exception& e) {
        fail(std::string("target descriptor: ") + e.what());
        return rep;
    }
    if (spec.variant == StdExtVariant::modified && spec.target.iso != IsoKind::none) {
        fail("modified variant is only defined for ordinary flag varieties");
        return rep;
    }
    if (!(spec.source.field == spec.target.field)) {
        fail("source and target field differ");
        return rep;
    }

    const std::size_t k = spec.k_source();
    const std::size_t kt = spec.k_target();
    const std::size_t nv = spec.source.ambient;
    const VarietyDescriptor<F> core_target = spec.core_target();

    if (spec.eps.size() != kt || core_target.type.dims.size() != kt) {
        fail("u_chain / eps / target type length mismatch");
        return rep;
    }
    if (spec.pbar.size() != kt + 2) {
        fail("pbar must have length k~ + 2");
        return rep;
    }
    if (spec.pbar.front() != 0) fail("pbar(0) must be 0");
    if (spec.pbar.back() != k + 1) fail("pbar(k~+1) must be k+1");
    for (std::size_t i = 0; i + 1 < spec.pbar.size(); ++i)
        if (spec.pbar[i] > spec.pbar[i + 1]) {
            fail("pbar not order-preserving at index " + std::to_string(i));
            return rep;
        }
    {
        std::vector<bool> hit(k + 2, false);
        for (auto v : spec.pbar) {
            if (v > k + 1) {
                fail("pbar value out of range");
                return rep;
            }
            hit[v] = true;
        }
        for (std::size_t i = 1; i <= k; ++i)
            if (!hit[i]) fail("pbar misses source stage " + std::to_string(i));
    }

    bool seen_nonzero = false;
    for (std::size_t i = 0; i < kt; ++i) {
        const auto& u = spec.u_chain[i];
        const auto& e = spec.eps[i];
        const std::string at = " at index " + std::to_string(i + 1);
        if (u.ambient_dim() != core_target.ambient) {
            fail("U lives in the wrong ambient space" + at);
            return rep;
        }
        if (u.dim() == 0) fail("U is zero" + at);
        if (i > 0 && !u.contains(spec.u_chain[i - 1])) fail("U chain not increasing" + at);
        if (e.rows() != nv || e.cols() != u.dim()) {
            fail("eps has wrong shape" + at);
            return rep;
        }
        const bool zero = e.is_zero();
        if (!zero && rank(e) != nv) fail("nonzero eps not surjective" + at);
        if (zero && spec.pbar[i + 1] != 0 && spec.pbar[i + 1] != k + 1)
            fail("zero eps with interior pbar stage" + at);
        if (zero && seen_nonzero) fail("zero eps after a nonzero one" + at);
        if (!zero) seen_nonzero = true;

        // commuting restriction: eps_{i+1} restricted to U_i equals eps_i
        if (i > 0) {
            const auto& prev_u = spec.u_chain[i - 1];
            if (u.contains(prev_u)) {
                Matrix<F> c = detail::coords_in(u, prev_u.basis());
                if (!(e.mul(c.transpose()) == spec.eps[i - 1]))
                    fail("diagram does not commute at index " + std::to_string(i));
            }
        }

        // declared target dimension must match the generic fiber dimension
        const std::size_t stage = spec.pbar[i + 1];
        const std::size_t ker_dim = u.dim() - rank(e);
        std::size_t value_dim;
        if (stage == 0)
            value_dim = ker_dim;
        else if (stage == k + 1)
            value_dim = u.dim();
        else
            value_dim = ker_dim + spec.source.type.dims[stage - 1];
        if (value_dim != core_target.type.dims[i])
            fail("stage dimension mismatch" + at + ": value dim " + std::to_string(value_dim) +
                 " vs target type " + std::to_string(core_target.type.dims[i]));
    }

    // isotropic conditions: kernels isotropic and eps an isometry modulo its
    // kernel (which also forces the restricted form to be nondegenerate
    // exactly off the kernel)
    if (spec.source.iso != IsoKind::none) {
        if (spec.target.iso != spec.source.iso) fail("isotropic kinds of source/target differ");
        const auto& bsrc = *spec.source.form;
        const auto& btgt = *spec.target.form;
        for (std::size_t i = 0; i < kt; ++i) {
            const auto& u = spec.u_chain[i];
            const auto& e = spec.eps[i];
            const std::string at = " at index " + std::to_string(i + 1);
            for (std::size_t a = 0; a < u.dim(); ++a) {
                std::vector<typename F::Element> ea_col(nv), eb_col(nv);
                for (std::size_t b = 0; b < u.dim(); ++b) {
                    for (std::size_t r = 0; r < nv; ++r) {
                        ea_col[r] = e.at(r, a);
                        eb_col[r] = e.at(r, b);
                    }
                    const auto lhs = btgt.pairing(u.basis().row(a), u.basis().row(b));
                    const auto rhs = bsrc.pairing(ea_col, eb_col);
                    if (!(lhs == rhs)) {
                        fail("eps not compatible with the forms" + at);
                        a = u.dim();
                        break;
                    }
                }
            }
            if (!e.is_zero()) {
                Subspace<F> ker = Subspace<F>::span(
                    Subspace<F>::span(nullspace(e)).basis().mul(u.basis()));
                if (!is_isotropic(btgt, ker)) fail("kernel of eps not isotropic" + at);
            } else if (!is_isotropic(btgt, u)) {
                fail("constant stage space not isotropic" + at);
            }
        }
    }

    // orthogonal edge case where a strict extension need not be linear
    if (spec.source.iso == IsoKind::orthogonal) {
        const auto& sdims = spec.source.type.dims;
        const auto& tdims = spec.target.type.dims;
        auto has = [](const std::vector<std::size_t>& v, std::size_t x) {
            return std::find(v.begin(), v.end(), x) != v.end();
        };
        const std::size_t half_s = spec.source.ambient / 2;
        const std::size_t half_t = spec.target.ambient / 2;
        bool exceptional = false;
        if (spec.source.ambient % 2 == 0 && half_s >= 1 && has(sdims, half_s - 1) &&
            !(spec.target.ambient % 2 == 0 && has(tdims, half_t - 1)))
            exceptional = true;
        if (spec.source.ambient % 2 == 0 && has(sdims, half_s) &&
            !(spec.target.ambient % 2 == 0 && (has(tdims, half_t - 1) || has(tdims, half_t))))
            exceptional = true;
        rep.not_linear_exception = exceptional;
    }

    return rep;
}

// ---------------------------------------------------------------------------
// Composition and duality
// ---------------------------------------------------------------------------

namespace detail {

/// Extend the previous operator by zero on a complement of prev_u in u.
/// Extensions of surjections stay surjective, so the datum remains valid.
template <FieldType F>
Matrix<F> extend_by_zero(const Subspace<F>& u, const Subspace<F>& prev_u, const Matrix<F>& prev_eps,
                         std::size_t nv) {
    const F& f = u.field();
    Matrix<F> out(f, nv, u.dim());
    // frame: basis of prev_u extended by rows of u's basis to a basis of u
    Matrix<F> frame = prev_u.basis();
    for (std::size_t r = 0; r < u.dim() && frame.rows() < u.dim(); ++r) {
        Matrix<F> row(f, 1, u.ambient_dim());
        row.set_row(0, u.basis().row(r));
        if (rank(frame.vstack(row)) > frame.rows()) frame = frame.vstack(row);
    }
    const Matrix<F> ft = frame.transpose();
    for (std::size_t r = 0; r < u.dim(); ++r) {
        auto c = solve(ft, u.basis().row(r));
        if (!c) throw std::logic_error("extend_by_zero: inconsistent frame");
        // image only from the prev_u coefficients
        for (std::size_t row = 0; row < nv; ++row) {
            auto v = f.zero();
            for (std::size_t t = 0; t < prev_u.dim(); ++t)
                v = f.add(v, f.mul(prev_eps.at(row, t), (*c)[t]));
            out.at(row, r) = v;
        }
    }
    return out;
}

}  // namespace detail

/// Data-level composition of two strict cores: the stage-j operator of the
/// composite is the outer operator followed by the inner one, restricted to
/// the preimage of the inner stage space.
template <FieldType F>
StdExtSpec<F> compose_strict_cores(const StdExtSpec<F>& f_spec, const StdExtSpec<F>& g_spec) {
    const F& f = f_spec.source.field;
    const std::size_t k_x = f_spec.k_source();
    const std::size_t k_y = g_spec.k_source();
    const std::size_t nv_x = f_spec.source.ambient;

    StdExtSpec<F> out;
    out.variant = StdExtVariant::strict;
    out.source = f_spec.source;
    out.target = g_spec.core_target();
    out.pbar.assign(g_spec.k_target() + 2, 0);
    out.pbar.back() = k_x + 1;

    for (std::size_t j = 0; j < g_spec.k_target(); ++j) {
        const std::size_t i = g_spec.pbar[j + 1];
        const auto& ug = g_spec.u_chain[j];
        const auto& eg = g_spec.eps[j];
        if (i == 0) {
            // constant bottom: the kernel of the outer operator
            Subspace<F> w = detail::eps_preimage(ug, eg, Subspace<F>::zero(f, g_spec.source.ambient));
            out.pbar[j + 1] = 0;
            out.eps.emplace_back(f, nv_x, w.dim());
            out.u_chain.push_back(std::move(w));
        } else if (i == k_y + 1) {
            // constant top: the whole stage space, operator extended by zero
            out.pbar[j + 1] = k_x + 1;
            if (out.u_chain.empty())
                throw std::invalid_argument("compose: top-constant stage with no predecessor");
            out.eps.push_back(
                detail::extend_by_zero(ug, out.u_chain.back(), out.eps.back(), nv_x));
            out.u_chain.push_back(ug);
        } else {
            const auto& uf = f_spec.u_chain[i - 1];
            const auto& ef = f_spec.eps[i - 1];
            Subspace<F> uh = detail::eps_preimage(ug, eg, uf);
            out.pbar[j + 1] = f_spec.pbar[i];
            // composite operator on the canonical basis of uh
            Matrix<F> cg = detail::coords_in(ug, uh.basis());
            Matrix<F> into_y = eg.mul(cg.transpose()).transpose();  // rows: images in Y
            Matrix<F> cf = detail::coords_in(uf, into_y);
            out.eps.push_back(ef.mul(cf.transpose()));
            out.u_chain.push_back(std::move(uh));
        }
    }
    return out;
}

/// The conjugate of a strict core by the duality on both sides: a strict core
/// between the dual-typed varieties whose stage spaces are annihilators of
/// the original kernels and whose operators solve psi . eps_j = phi on U_j.
template <FieldType F>
StdExtSpec<F> conjugate_core(const StdExtSpec<F>& g) {
    const F& f = g.source.field;
    const std::size_t k = g.k_source();
    const std::size_t kt = g.k_target();
    const std::size_t nv = g.source.ambient;

    StdExtSpec<F> out;
    out.variant = StdExtVariant::strict;
    out.source = dual_descriptor(g.source);
    out.target = dual_descriptor(g.core_target());
    out.pbar.assign(kt + 2, 0);
    out.pbar.back() = k + 1;

    for (std::size_t jj = 1; jj <= kt; ++jj) {
        const std::size_t j = kt + 1 - jj;  // original index, reversed
        const auto& u = g.u_chain[j - 1];
        const auto& e = g.eps[j - 1];
        const std::size_t stage = g.pbar[j];
        out.pbar[jj] = k + 1 - stage;

        if (e.is_zero()) {
            // original constant bottom becomes a constant top stage
            Subspace<F> x = annihilator(u);
            if (out.u_chain.empty())
                throw std::invalid_argument("conjugate_core: constant top with no predecessor");
            out.eps.push_back(detail::extend_by_zero(x, out.u_chain.back(), out.eps.back(), nv));
            out.u_chain.push_back(std::move(x));
            continue;
        }
        Subspace<F> w = detail::eps_preimage(u, e, Subspace<F>::zero(f, nv));
        Subspace<F> x = annihilator(w);
        // solve eps^T psi = B_U phi for each basis functional phi of x
        Matrix<F> ex = e.transpose();
        Matrix<F> ops(f, nv, x.dim());
        for (std::size_t c = 0; c < x.dim(); ++c) {
            auto rhs = u.basis().mul_vec(x.basis().row(c));
            auto psi = solve(ex, rhs);
            if (!psi) throw std::logic_error("conjugate_core: inconsistent dual operator");
            for (std::size_t r = 0; r < nv; ++r) ops.at(r, c) = (*psi)[r];
        }
        out.eps.push_back(std::move(ops));
        out.u_chain.push_back(std::move(x));
    }
    return out;
}

/// Composition g after f.  The variant follows the parity rule:
/// strict.strict and modified.modified are strict, mixed is modified.
template <FieldType F>
StdExtSpec<F> compose(const StdExtSpec<F>& f_spec, const StdExtSpec<F>& g_spec) {
    const bool f_mod = f_spec.variant == StdExtVariant::modified;
    const bool g_mod = g_spec.variant == StdExtVariant::modified;
    if (!(f_spec.target == g_spec.source))
        throw std::invalid_argument("compose: target of f must equal source of g");

    StdExtSpec<F> out;
    if (!f_mod && !g_mod) {
        out = compose_strict_cores(f_spec, g_spec);
    } else if (!f_mod && g_mod) {
        out = compose_strict_cores(f_spec, g_spec);  // cores compose directly
        out.variant = StdExtVariant::modified;
    } else if (f_mod && !g_mod) {
        out = compose_strict_cores(f_spec, conjugate_core(g_spec));
        out.variant = StdExtVariant::modified;
    } else {
        out = compose_strict_cores(f_spec, conjugate_core(g_spec));
        out.variant = StdExtVariant::strict;
    }
    out.source = f_spec.source;
    out.target = g_spec.target;
    return out;
}

/// The spec of d . apply(spec), into the dual-typed target variety.  Since
/// the duality is an involution this flips the variant and leaves the core
/// data unchanged; dualize(dualize(s)) has the same apply as s.
template <FieldType F>
StdExtSpec<F> dualize(const StdExtSpec<F>& spec) {
    if (spec.source.iso != IsoKind::none || spec.target.iso != IsoKind::none)
        throw std::invalid_argument("dualize: duality is not defined for isotropic varieties");
    StdExtSpec<F> out = spec;
    out.variant =
        spec.variant == StdExtVariant::strict ? StdExtVariant::modified : StdExtVariant::strict;
    out.target = dual_descriptor(spec.target);
    return out;
}

// ---------------------------------------------------------------------------
// Direct-sum splitting and elementary decomposition
// ---------------------------------------------------------------------------

/// Splitting of a strict spec into its direct-sum presentation.  The section
/// of the last nonzero operator embeds the source; its kernel extended by a
/// standard-basis completion is the complement (the orthogonal complement of
/// the embedded source in the isotropic case); the W-chain is the trace of
/// the stage spaces in that complement.
template <FieldType F>
NaiveStdExt<F> prop_splitting(const StdExtSpec<F>& spec) {
    if (spec.variant != StdExtVariant::strict)
        throw std::invalid_argument("prop_splitting: spec must be strict");
    const F& f = spec.source.field;
    const std::size_t nv = spec.source.ambient;
    const std::size_t nt = spec.target.ambient;

    std::size_t first = 0;
    while (first < spec.k_target() && spec.eps[first].is_zero()) ++first;
    if (first == spec.k_target())
        throw std::invalid_argument("prop_splitting: all operators vanish");
    std::size_t last = spec.k_target();
    while (last > 0 && spec.eps[last - 1].is_zero()) --last;

    // Section of the first nonzero operator: its image lies inside every
    // later stage space, so one embedded copy of the source serves them all.
    const auto& u_first = spec.u_chain[first];
    const auto& e_first = spec.eps[first];
    Matrix<F> iota(f, nt, nv);
    for (std::size_t c = 0; c < nv; ++c) {
        std::vector<typename F::Element> unit(nv, f.zero());
        unit[c] = f.one();
        auto coords = solve(e_first, unit);
        if (!coords) throw std::logic_error("prop_splitting: surjective operator has no section");
        auto vec = u_first.basis().transpose().mul_vec(*coords);
        for (std::size_t r = 0; r < nt; ++r) iota.at(r, c) = vec[r];
    }
    const Subspace<F> vimg = Subspace<F>::span(iota.transpose());

    Subspace<F> w_hat = Subspace<F>::zero(f, nt);
    if (spec.source.iso != IsoKind::none) {
        w_hat = orth_complement(*spec.target.form, vimg);
    } else {
        // kernel of the last nonzero operator, completed to a complement of
        // the embedded source by standard basis vectors
        const auto& u_star = spec.u_chain[last - 1];
        Subspace<F> w_star =
            detail::eps_preimage(u_star, spec.eps[last - 1], Subspace<F>::zero(f, nv));
        Matrix<F> gens = w_star.basis();
        Matrix<F> context = u_star.basis();
        for (std::size_t c = 0; c < nt && rank(context) < nt; ++c) {
            Matrix<F> row(f, 1, nt);
            row.at(0, c) = f.one();
            if (rank(context.vstack(row)) > rank(context)) {
                context = context.vstack(row);
                gens = gens.vstack(row);
            }
        }
        w_hat = Subspace<F>::span(gens);
    }

    NaiveStdExt<F> out{spec.source, spec.target, std::move(iota), w_hat, {}, spec.pbar};
    for (std::size_t i = 0; i < spec.k_target(); ++i)
        out.w_chain.push_back(intersect(spec.u_chain[i], w_hat));
    return out;
}

/// Evaluate the direct-sum presentation on a flag (the naive formula).
template <FieldType F>
Flag<F> apply_naive(const NaiveStdExt<F>& naive, const Flag<F>& fl) {
    const std::size_t k = naive.source.type.dims.size();
    const Subspace<F> vimg = Subspace<F>::span(naive.v_embedding.transpose());
    std::vector<Subspace<F>> spaces;
    for (std::size_t j = 0; j < naive.w_chain.size(); ++j) {
        const std::size_t stage = naive.pbar[j + 1];
        if (stage == 0) {
            spaces.push_back(naive.w_chain[j]);
        } else if (stage == k + 1) {
            spaces.push_back(sum(vimg, naive.w_chain[j]));
        } else {
            spaces.push_back(
                sum(map_subspace(naive.v_embedding, fl.project(stage)), naive.w_chain[j]));
        }
    }
    return Flag<F>(std::move(spaces));
}

namespace detail {

/// Indices (within an adapted basis) spanning a coordinate subspace, or
/// nullopt if the subspace is not a coordinate one.
template <FieldType F>
std::optional<std::vector<std::size_t>> coordinate_support(const Subspace<F>& sub_in_coords) {
    const F& f = sub_in_coords.field();
    std::vector<std::size_t> support;
    for (std::size_t r = 0; r < sub_in_coords.dim(); ++r) {
        std::size_t nonzeros = 0, col = 0;
        for (std::size_t c = 0; c < sub_in_coords.ambient_dim(); ++c) {
            if (!f.is_zero(sub_in_coords.basis().at(r, c))) {
                ++nonzeros;
                col = c;
            }
        }
        if (nonzeros != 1) return std::nullopt;
        support.push_back(col);
    }
    return support;
}

}  // namespace detail

/// One-block-at-a-time refinement of a strict extension: ordinary extensions
/// are cut into one-codimension steps, isotropic ones into one-hyperbolic-
/// pair steps.  basis_w must be an ordered basis of a complement of the
/// embedded source such that every stage trace is a coordinate subspace of
/// it; the steps append its vectors in order, so the composite applies the
/// original map exactly.
template <FieldType F>
std::vector<StdExtSpec<F>> decompose_elementary(const StdExtSpec<F>& spec,
                                                const Matrix<F>& basis_w) {
    if (spec.variant != StdExtVariant::strict)
        throw std::invalid_argument("decompose_elementary: spec must be strict");
    const F& f = spec.source.field;
    const std::size_t nv = spec.source.ambient;
    const std::size_t nt = spec.target.ambient;
    const std::size_t k = spec.k_source();
    const std::size_t kt = spec.k_target();
    const std::size_t r = basis_w.rows();
    const std::size_t block = spec.source.iso == IsoKind::none ? 1 : 2;

    if (basis_w.cols() != nt || r != nt - nv)
        throw std::invalid_argument("decompose_elementary: basis_w has wrong shape");
    if (r % block != 0)
        throw std::invalid_argument("decompose_elementary: basis size not divisible by step size");

    const Subspace<F> w_hat = Subspace<F>::span(basis_w);
    if (w_hat.dim() != r)
        throw std::invalid_argument("decompose_elementary: basis_w not independent");

    std::size_t first = 0;
    while (first < kt && spec.eps[first].is_zero()) ++first;
    if (first == kt) throw std::invalid_argument("decompose_elementary: all operators vanish");
    std::size_t last = kt;
    while (last > 0 && spec.eps[last - 1].is_zero()) --last;
    const auto& u_star = spec.u_chain[last - 1];
    Subspace<F> w_star =
        detail::eps_preimage(u_star, spec.eps[last - 1], Subspace<F>::zero(f, nv));
    if (!(intersect(u_star, w_hat) == w_star))
        throw std::invalid_argument("decompose_elementary: basis not adapted to the stage kernels");

    // section of the first nonzero operator, embedded in every later stage
    Matrix<F> iota(f, nt, nv);
    for (std::size_t c = 0; c < nv; ++c) {
        std::vector<typename F::Element> unit(nv, f.zero());
        unit[c] = f.one();
        auto coords = solve(spec.eps[first], unit);
        if (!coords) throw std::logic_error("decompose_elementary: no section");
        auto vec = spec.u_chain[first].basis().transpose().mul_vec(*coords);
        for (std::size_t row = 0; row < nt; ++row) iota.at(row, c) = vec[row];
    }
    if (rank(iota.transpose().vstack(basis_w)) != nt)
        throw std::invalid_argument("decompose_elementary: basis_w does not complement the source");

    // supports of the stage traces within basis_w
    const Matrix<F> frame_t = iota.hstack(basis_w.transpose());  // nt x nt, invertible
    const Matrix<F> to_coords = inverse(frame_t);
    std::vector<std::vector<bool>> in_w(kt, std::vector<bool>(r, false));
    for (std::size_t j = 0; j < kt; ++j) {
        Subspace<F> trace = intersect(spec.u_chain[j], w_hat);
        if (spec.pbar[j + 1] == 0 && !(trace == spec.u_chain[j]))
            throw std::invalid_argument("decompose_elementary: constant stage " +
                                        std::to_string(j + 1) + " not inside the complement");
        Matrix<F> coords = trace.basis().mul(to_coords.transpose());
        std::vector<std::size_t> wcols(r);
        for (std::size_t c = 0; c < r; ++c) wcols[c] = nv + c;
        auto support = detail::coordinate_support(Subspace<F>::span(coords.columns(wcols)));
        if (!support || support->size() != trace.dim())
            throw std::invalid_argument("decompose_elementary: stage trace " +
                                        std::to_string(j + 1) +
                                        " is not a coordinate subspace of basis_w");
        for (auto c : *support) in_w[j][c] = true;
    }

    const std::size_t steps = r / block;
    if (steps <= 1) return {spec};

    // stage value in step-s coordinates (source block first, then s w-slots)
    struct StageValue {
        std::size_t pbar_stage;          // 0 .. k+1 relative to the original source
        std::vector<std::size_t> slots;  // w-slot indices present
        std::size_t dim(std::size_t nv, const std::vector<std::size_t>& sdims,
                        std::size_t k) const {
            std::size_t d = slots.size();
            if (pbar_stage == k + 1)
                d += nv;
            else if (pbar_stage != 0)
                d += sdims[pbar_stage - 1];
            return d;
        }
    };
    auto stage_values = [&](std::size_t upto) {
        std::vector<StageValue> vals;
        for (std::size_t j = 0; j < kt; ++j) {
            StageValue v;
            v.pbar_stage = spec.pbar[j + 1];
            for (std::size_t c = 0; c < upto; ++c)
                if (in_w[j][c]) v.slots.push_back(c);
            vals.push_back(std::move(v));
        }
        return vals;
    };
    const auto& sdims = spec.source.type.dims;

    // dedup'd type of the intermediate flag after the first `upto` w-vectors
    auto stage_layout = [&](std::size_t upto) {
        const std::size_t amb = nv + upto;
        auto vals = stage_values(upto);
        std::vector<std::size_t> kept;  // original indices kept, deduped
        std::vector<std::size_t> dims;
        for (std::size_t j = 0; j < kt; ++j) {
            const std::size_t d = vals[j].dim(nv, sdims, k);
            if (d == 0 || d == amb) continue;
            if (!dims.empty() && d == dims.back()) continue;  // same value: chain is monotone
            kept.push_back(j);
            dims.push_back(d);
        }
        return std::pair(kept, vals);
    };

    std::vector<StdExtSpec<F>> out;
    for (std::size_t s = 1; s <= steps; ++s) {
        const std::size_t lo = (s - 1) * block, hi = s * block;
        auto [kept_prev, vals_prev] = stage_layout(lo);
        auto [kept_cur, vals_cur] = stage_layout(hi);
        const std::size_t amb_prev = nv + lo, amb_cur = nv + hi;

        NaiveStdExt<F> step{{}, {}, Matrix<F>(f, 1, 1), Subspace<F>::zero(f, 1), {}, {}};

        // source descriptor of this step
        step.source.ambient = amb_prev;
        step.source.field = f;
        step.source.iso = spec.source.iso;
        for (auto j : kept_prev) step.source.type.dims.push_back(vals_prev[j].dim(nv, sdims, k));
        step.target.ambient = amb_cur;
        step.target.field = f;
        step.target.iso = spec.source.iso;
        for (auto j : kept_cur) step.target.type.dims.push_back(vals_cur[j].dim(nv, sdims, k));

        // embedding of the previous intermediate space
        const bool final_step = s == steps;
        Matrix<F> emb(f, final_step ? nt : amb_cur, amb_prev);
        if (final_step) {
            for (std::size_t c = 0; c < nv; ++c)
                for (std::size_t row = 0; row < nt; ++row) emb.at(row, c) = iota.at(row, c);
            for (std::size_t c = 0; c < lo; ++c)
                for (std::size_t row = 0; row < nt; ++row)
                    emb.at(row, nv + c) = basis_w.at(c, row);
        } else {
            for (std::size_t c = 0; c < amb_prev; ++c) emb.at(c, c) = f.one();
        }
        step.v_embedding = emb;

        // complement of the step: the newly appended block
        {
            Matrix<F> gens(f, block, final_step ? nt : amb_cur);
            for (std::size_t b = 0; b < block; ++b) {
                if (final_step)
                    gens.set_row(b, basis_w.row(lo + b));
                else
                    gens.at(b, amb_prev + b) = f.one();
            }
            step.w_hat = Subspace<F>::span(gens);
        }

        // forms on the intermediate spaces
        if (spec.source.iso != IsoKind::none) {
            auto gram_for = [&](std::size_t upto, std::size_t amb) {
                Matrix<F> cols(f, nt, amb);
                for (std::size_t c = 0; c < nv; ++c)
                    for (std::size_t row = 0; row < nt; ++row) cols.at(row, c) = iota.at(row, c);
                for (std::size_t c = 0; c < upto; ++c)
                    for (std::size_t row = 0; row < nt; ++row)
                        cols.at(row, nv + c) = basis_w.at(c, row);
                Matrix<F> g = cols.transpose().mul(spec.target.form->gram()).mul(cols);
                return g;
            };
            if (!final_step)
                step.target.form = BilinearSpace<F>(spec.target.form->kind(), gram_for(hi, amb_cur));
            else
                step.target.form = spec.target.form;
            if (s > 1)
                step.source.form = BilinearSpace<F>(spec.target.form->kind(), gram_for(lo, amb_prev));
            else
                step.source.form = spec.source.form;
            if (step.source.needs_component() || step.target.needs_component())
                throw std::invalid_argument(
                    "decompose_elementary: maximal orthogonal intermediate stages are not "
                    "supported");
        }
        if (s == 1) step.source = spec.source;

        // pbar of this step and the per-stage complements
        step.pbar.assign(kept_cur.size() + 2, 0);
        step.pbar.back() = kept_prev.size() + 1;
        for (std::size_t jj = 0; jj < kept_cur.size(); ++jj) {
            const std::size_t j = kept_cur[jj];
            // previous-stage value of the same original index
            const std::size_t dprev = vals_prev[j].dim(nv, sdims, k);
            std::size_t stage;
            if (dprev == 0) {
                stage = 0;
            } else if (dprev == amb_prev) {
                stage = kept_prev.size() + 1;
            } else {
                // the previous value equals the kept stage of the same dimension
                stage = 0;
                for (std::size_t t = 0; t < kept_prev.size(); ++t)
                    if (vals_prev[kept_prev[t]].dim(nv, sdims, k) == dprev) {
                        stage = t + 1;
                        break;
                    }
                if (stage == 0)
                    throw std::logic_error("decompose_elementary: lost intermediate stage");
            }
            step.pbar[jj + 1] = stage;

            Matrix<F> wgens(f, 0, final_step ? nt : amb_cur);
            for (std::size_t b = 0; b < block; ++b) {
                if (!in_w[j][lo + b]) continue;
                Matrix<F> row(f, 1, final_step ? nt : amb_cur);
                if (final_step)
                    row.set_row(0, basis_w.row(lo + b));
                else
                    row.at(0, amb_prev + b) = f.one();
                wgens = wgens.vstack(row);
            }
            step.w_chain.push_back(Subspace<F>::span(wgens));
        }

        out.push_back(make_strict(step));
    }
    return out;
}

}  // namespace flagkit
