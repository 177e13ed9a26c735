#pragma once

#include "kext/matrix.hpp"
#include "kext/ring.hpp"

#include <map>
#include <string>
#include <vector>

namespace kext {

/// Ring homomorphism given by the images of the source's variables. The
/// structure map on coefficients is the unique one (Z -> anything, Z/n -> Z/m
/// for m | n, Q -> characteristic 0 targets).
class RingHom {
public:
    RingHom() = default;

    RingHom(Ring source, Ring target, std::vector<Elem> images)
        : source_(std::move(source)), target_(std::move(target)), images_(std::move(images))
    {
        if (images_.size() != source_->variables().size())
            fail(ErrorCode::NotAHomomorphism, "ring",
                 "expected " + std::to_string(source_->variables().size()) + " variable images");
        BigInt ch = source_->characteristic();
        if (ch != 0 && !target_->is_zero(target_->from_int(ch)))
            fail(ErrorCode::NotAHomomorphism, "ring",
                 "characteristic " + ch.str() + " does not vanish in " + target_->descriptor());
        bool rational_source = source_->kind() == RingKind::Rationals ||
                               (source_->kind() == RingKind::PolyQuotient && ch == 0);
        if (rational_source && (target_->characteristic() != 0 || target_->kind() == RingKind::Integers))
            fail(ErrorCode::NotAHomomorphism, "ring", "rationals cannot map to " + target_->descriptor());
        for (const auto& rel : source_->spec().relations) {
            if (!target_->is_zero(eval_raw(parse_raw(rel))))
                fail(ErrorCode::NotAHomomorphism, "ring",
                     "relation " + rel + " does not map to zero in " + target_->descriptor());
        }
    }

    const Ring& source() const { return source_; }
    const Ring& target() const { return target_; }
    const std::vector<Elem>& images() const { return images_; }

    Elem operator()(const Elem& a) const
    {
        switch (source_->kind()) {
        case RingKind::Integers: return target_->from_int(std::get<BigInt>(a));
        case RingKind::Rationals: return target_->from_rat(std::get<BigRat>(a));
        case RingKind::IntegersModN:
        case RingKind::PrimeField: return target_->from_int(BigInt(std::get<std::int64_t>(a)));
        case RingKind::PolyQuotient:
            if (std::holds_alternative<PolyFp>(a)) return eval_poly(std::get<PolyFp>(a));
            return eval_poly(std::get<PolyQ>(a));
        }
        return target_->zero();
    }

    Matrix operator()(const Matrix& m) const
    {
        require_same_ring(m.ring, source_, "ring");
        Matrix out(target_, m.rows, m.cols);
        for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = (*this)(m.data[i]);
        return out;
    }

    Elem eval_raw(const RawPoly& raw) const
    {
        Elem sum = target_->zero();
        const auto& vars = source_->variables();
        for (const auto& t : raw) {
            Elem term = target_->from_rat(t.coef);
            for (const auto& [name, e] : t.powers) {
                std::size_t idx = vars.size();
                for (std::size_t i = 0; i < vars.size(); ++i)
                    if (vars[i] == name) idx = i;
                if (idx == vars.size()) fail(ErrorCode::UnknownVariable, "ring", "unknown variable '" + name + "'");
                term = target_->mul(term, target_->pow(images_[idx], e));
            }
            sum = target_->add(sum, term);
        }
        return sum;
    }

private:
    template <class C>
    Elem eval_poly(const Poly<C>& p) const
    {
        Elem sum = target_->zero();
        for (const auto& t : p.terms) {
            Elem term;
            if constexpr (std::is_same_v<C, BigRat>) term = target_->from_rat(t.coef);
            else term = target_->from_int(BigInt(t.coef));
            for (std::size_t i = 0; i < images_.size(); ++i)
                if (t.mono.e[i]) term = target_->mul(term, target_->pow(images_[i], t.mono.e[i]));
            sum = target_->add(sum, term);
        }
        return sum;
    }

    Ring source_;
    Ring target_;
    std::vector<Elem> images_;
};

inline RingHom identity_hom(const Ring& r)
{
    std::vector<Elem> images;
    for (std::size_t i = 0; i < r->variables().size(); ++i) images.push_back(r->variable(i));
    return RingHom(r, r, images);
}

/// The homomorphism sending each source variable to the target variable of the
/// same name.
inline RingHom canonical_hom(const Ring& source, const Ring& target)
{
    std::vector<Elem> images;
    const auto& tv = target->variables();
    for (const auto& v : source->variables()) {
        std::size_t idx = tv.size();
        for (std::size_t i = 0; i < tv.size(); ++i)
            if (tv[i] == v) idx = i;
        if (idx == tv.size())
            fail(ErrorCode::NotAHomomorphism, "ring", "variable " + v + " has no counterpart in " + target->descriptor());
        images.push_back(target->variable(idx));
    }
    return RingHom(source, target, images);
}

} // namespace kext
