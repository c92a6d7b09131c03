#include "dvrforms/cli.hpp"

#include <map>
#include <sstream>

#include "dvrforms/decompose.hpp"
#include "dvrforms/io.hpp"
#include "dvrforms/smith.hpp"

namespace dvrforms {

namespace {

GramForm load_form(const std::string& file, const CliOptions& opt) {
    InstanceFile inst = read_instance_file(file, opt.precision);
    if (!inst.epsilon) throw Error(file + ": missing 'epsilon' line");
    return GramForm::validate(inst.matrix, *inst.epsilon);
}

int fail(const std::exception& e, std::ostream& err) {
    err << "error: " << e.what() << "\n";
    return 1;
}

void print_profile(const InvariantProfile& profile, bool machine, std::ostream& out) {
    if (machine) {
        for (const auto& [level, size] : profile.d) {
            out << "d_" << level << "=" << size << "\n";
            FormType t = level_type(level, profile.epsilon, *profile.ring);
            out << "type_" << level << "=" << form_type_name(t) << "\n";
            auto it = profile.level_data.find(level);
            if (it != profile.level_data.end() && it->second.disc != DiscClass::not_applicable)
                out << "disc_" << level << "=" << disc_class_name(it->second.disc) << "\n";
        }
        out << "d_inf=" << profile.d_inf << "\n";
    } else {
        out << profile.to_string() << "\n";
    }
}

std::map<int, std::size_t> parse_d_list(const std::string& d_list) {
    std::map<int, std::size_t> d;
    std::istringstream in(d_list);
    std::string part;
    int level = 0;
    while (std::getline(in, part, ',')) {
        std::size_t used = 0;
        long long v = std::stoll(part, &used);
        if (used != part.size() || v < 0) throw Error("malformed d-list entry '" + part + "'");
        if (v > 0) d[level] = (std::size_t)v;
        ++level;
    }
    return d;
}

} // namespace

int cmd_validate(const std::string& file, const CliOptions& opt, std::ostream& out,
                 std::ostream& err) {
    try {
        InstanceFile inst = read_instance_file(file, opt.precision);
        if (!inst.epsilon) throw Error(file + ": missing 'epsilon' line");
        try {
            GramForm::validate(inst.matrix, *inst.epsilon);
        } catch (const NotEpsilonHermitian& e) {
            if (opt.machine) {
                out << "epsilon_hermitian=no\n";
                out << "violation_row=" << e.row << "\n";
                out << "violation_col=" << e.col << "\n";
            } else {
                out << "epsilon-hermitian: no (" << e.what() << ")\n";
            }
            return 1;
        }
        out << (opt.machine ? "epsilon_hermitian=yes" : "epsilon-hermitian: yes") << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail(e, err);
    }
}

int cmd_invariants(const std::string& file, const CliOptions& opt, std::ostream& out,
                   std::ostream& err) {
    try {
        GramForm form = load_form(file, opt);
        InvariantProfile profile = invariant_profile(form);
        print_profile(profile, opt.machine, out);
        return 0;
    } catch (const std::exception& e) {
        return fail(e, err);
    }
}

int cmd_normal_form(const std::string& file, const CliOptions& opt, std::ostream& out,
                    std::ostream& err) {
    try {
        GramForm form = load_form(file, opt);
        NormalForm nf = normal_form(form);
        if (opt.machine) {
            print_profile(nf.profile, true, out);
            out << "canonical:\n" << serialise_instance(nf.canonical.matrix(), form.epsilon());
        } else {
            out << "profile: " << nf.profile.to_string() << "\n";
            out << "canonical form:\n" << serialise_instance(nf.canonical.matrix(), form.epsilon());
        }
        if (opt.witness_path) {
            write_instance_file(*opt.witness_path, nf.witness.x, std::nullopt);
            out << (opt.machine ? "witness_file=" : "witness written to ") << *opt.witness_path
                << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        return fail(e, err);
    }
}

int cmd_congruent(const std::string& file_a, const std::string& file_b, const CliOptions& opt,
                  std::ostream& out, std::ostream& err) {
    try {
        GramForm a = load_form(file_a, opt);
        GramForm b = load_form(file_b, opt);
        CongruenceVerdict verdict = decide_congruent(a, b);
        if (!verdict.congruent) {
            if (opt.machine) {
                out << "congruent=no\n";
                out << "reason=" << verdict.reason << "\n";
            } else {
                out << "congruent: no (" << verdict.reason << ")\n";
            }
            return 2;
        }
        out << (opt.machine ? "congruent=yes" : "congruent: yes") << "\n";
        if (opt.witness_path) {
            Witness w = congruence_witness(a, b);
            write_instance_file(*opt.witness_path, w.x, std::nullopt);
            out << (opt.machine ? "witness_file=" : "witness written to ") << *opt.witness_path
                << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        return fail(e, err);
    }
}

int cmd_realisable(const std::string& kind_name, std::int64_t p, int precision, int epsilon,
                   const std::string& d_list, const CliOptions& opt, std::ostream& out,
                   std::ostream& err) {
    try {
        RingKind kind;
        if (!parse_ring_kind(kind_name, kind)) throw Error("unknown ring kind '" + kind_name + "'");
        RingPtr ring = Ring::make(kind, p, opt.precision.value_or(precision));
        if (epsilon != 1 && epsilon != -1) throw Error("epsilon must be 1 or -1");
        std::map<int, std::size_t> d = parse_d_list(d_list);
        bool ok = realisable(d, epsilon, *ring);
        if (!ok) {
            out << (opt.machine ? "realisable=no" : "realisable: no") << "\n";
            return 2;
        }
        out << (opt.machine ? "realisable=yes" : "realisable: yes") << "\n";
        if (!d.empty()) {
            GramForm witness = canonical_from_profile(d, 0, epsilon, ring);
            out << (opt.machine ? "witness:\n" : "witness canonical form:\n")
                << serialise_instance(witness.matrix(), epsilon);
        }
        return 0;
    } catch (const std::exception& e) {
        return fail(e, err);
    }
}

int cmd_verify(const std::string& file_a, const std::string& file_b,
               const std::string& witness_file, const CliOptions& opt, std::ostream& out,
               std::ostream& err) {
    try {
        GramForm a = load_form(file_a, opt);
        GramForm b = load_form(file_b, opt);
        InstanceFile wf = read_instance_file(witness_file, opt.precision);
        RingMatrix x = wf.matrix;
        if (!a.ring()->same_ring(*x.ring())) throw Error("witness ring differs from source ring");
        RingMatrix conj = x.conj_transpose() * a.matrix() * x;
        if (conj.payload_equal(b.matrix())) {
            out << (opt.machine ? "verified=yes" : "witness verifies: X'* A X = B") << "\n";
            return 0;
        }
        out << (opt.machine ? "verified=no" : "witness does not verify") << "\n";
        return 2;
    } catch (const std::exception& e) {
        return fail(e, err);
    }
}

} // namespace dvrforms
