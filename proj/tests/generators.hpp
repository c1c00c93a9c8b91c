#ifndef MDSL_TESTS_GENERATORS_HPP
#define MDSL_TESTS_GENERATORS_HPP

#include <random>
#include <string>
#include <vector>

#include "mdsl/xf.hpp"

namespace testing_support {

/// Up to `max_actions` random actions over `target`. Not necessarily valid: callers keep the
/// ones that derive cleanly.
inline mdsl::xf::Transformation random_actions(const mdsl::Metamodel& target, std::mt19937& rng,
                                               std::size_t max_actions = 6)
{
    using namespace mdsl;
    using namespace mdsl::xf;
    std::vector<ClassHandle> domain = mapping_domain(target);
    auto proto = [&](ClassHandle h) {
        return h.is_ecore() ? TypeRef{"ecore", h.name()} : TypeRef{"", h.name()};
    };
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    Transformation t;
    std::size_t count = 1 + pick(max_actions);
    std::vector<std::string> created;
    // Creates first so later picks can refer to them; order is shuffled by the callers anyway.
    std::size_t creates = pick(3);
    for (std::size_t i = 0; i < creates && t.actions.size() < count; ++i) {
        CreateClass cc;
        cc.name = "Made" + std::to_string(i);
        cc.is_abstract = pick(4) == 0;
        FeatureSpec f;
        f.name = "text";
        f.kind = FeatureKind::attribute;
        f.type = AstRef::datatype("String");
        cc.features.push_back(f);
        if (!created.empty() && pick(2)) {
            FeatureSpec r;
            r.name = "part";
            r.kind = FeatureKind::reference;
            r.containment = true;
            r.bounds = {0, unbounded};
            r.type = AstRef::created(created[pick(created.size())]);
            cc.features.push_back(r);
        }
        if (!domain.empty() && pick(3) == 0)
            cc.superclasses.push_back(AstRef::image(proto(domain[pick(domain.size())])));
        created.push_back(cc.name);
        t.actions.push_back(std::move(cc));
    }
    auto any_class = [&]() -> AstRef {
        if (!created.empty() && pick(2))
            return AstRef::created(created[pick(created.size())]);
        return AstRef::image(proto(domain[pick(domain.size())]));
    };
    while (t.actions.size() < count && !domain.empty()) {
        switch (pick(3)) {
        case 0: {
            TranslateReferences tr;
            tr.model_reference_type = proto(domain[pick(domain.size())]);
            tr.include_descendants = pick(2);
            tr.textual_reference_type =
                pick(2) ? AstRef::datatype(pick(2) ? "String" : "int") : any_class();
            t.actions.push_back(tr);
            break;
        }
        case 1: {
            ChangeInheritance ci;
            ci.target = any_class();
            if (pick(2))
                ci.superclasses.push_back(any_class());
            t.actions.push_back(ci);
            break;
        }
        default: {
            SkipClass sc;
            sc.target = proto(domain[pick(domain.size())]);
            sc.include_descendants = pick(2);
            t.actions.push_back(sc);
        }
        }
    }
    return t;
}

}  // namespace testing_support

#endif
