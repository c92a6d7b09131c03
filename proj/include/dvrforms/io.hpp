#pragma once

#include <optional>
#include <string>

#include "dvrforms/form.hpp"
#include "dvrforms/matrix.hpp"
#include "dvrforms/ring.hpp"

namespace dvrforms {

// The instance file grammar (README documents it in full):
//
//   # comment lines and blank lines are skipped
//   ring <kind> p=<odd prime> precision=<N>
//   epsilon <1|-1>            (omitted in witness files)
//   matrix <m>
//   <m rows of m whitespace-separated entry tokens>
//
// Entry tokens by ring kind (no spaces inside brackets):
//   series-trivial/-ramified   [c0,c1,...]      sum c_k y^k
//   series-unramified          [[a,b],[a,b],..] sum (a_k + b_k t) x^k
//   padic-trivial              integer
//   padic-ramified             [a,b]            a + b sqrt(p)
//   padic-unramified           [a,b]            a + b t
// The bare token 0 is the exact zero for every kind; an all-zero literal
// ([0], [0,0], [[0,0]]) is exact as well. Truncated zeros cannot be
// written: entries are exact by construction.
struct InstanceFile {
    RingPtr ring;
    std::optional<int> epsilon;
    RingMatrix matrix;
};

InstanceFile parse_instance_text(const std::string& text,
                                 std::optional<int> precision_override = std::nullopt);
InstanceFile read_instance_file(const std::string& path,
                                std::optional<int> precision_override = std::nullopt);

std::string serialise_instance(const RingMatrix& matrix, std::optional<int> epsilon);
void write_instance_file(const std::string& path, const RingMatrix& matrix,
                         std::optional<int> epsilon);

std::string serialise_element(const RingElement& e);

} // namespace dvrforms
