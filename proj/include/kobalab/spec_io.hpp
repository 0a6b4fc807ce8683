#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "kobalab/construction.hpp"
#include "kobalab/domains.hpp"
#include "kobalab/field.hpp"
#include "kobalab/geodesics.hpp"
#include "kobalab/kobayashi.hpp"
#include "kobalab/psh.hpp"

namespace kobalab {

using Json = nlohmann::json;

/// Malformed spec document; `path` locates the offending key ("domain.factors[1].radius").
class SpecError : public Error {
 public:
  SpecError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Complex numbers are a number (real) or [re, im].
cplx complex_from_json(const Json& j, const std::string& path);
Json to_json(cplx c);

/// Points are arrays of complex numbers. `dim` = 0 accepts any positive dimension.
ComplexPoint point_from_json(const Json& j, const std::string& path, std::size_t dim = 0);
Json to_json(const ComplexPoint& z);

/// Fields:
///   {"type":"norm2","dim":n}
///   {"type":"quadratic","hermitian":[[c,..],..],"symmetric":[[c,..],..],"constant":x}
///   {"type":"expression","dim":n,"expr":"..."}
///   {"type":"lift","u":field,"n":n}
///   {"type":"sibony-experimental","N":depth,"terms":..,"eps":..,"d0":..,"d1":..,"mu":..,"eta":..}
ScalarField field_from_json(const Json& j, const std::string& path);

/// Domains:
///   {"type":"ball","dim":n,"center":point,"radius":r}
///   {"type":"polydisc","dim":n,"center":point,"radius":r | "radii":[..]}
///   {"type":"product","factors":[domain,..]}
///   {"type":"sublevel","field":field,"level":c,"ambient":domain,"seed":point,
///    "anchors":[point,..],"lipschitz":L}
DomainPtr domain_from_json(const Json& j, const std::string& path);

/// {"links":[{"c":point,"d":point,"zin":c,"zout":c},..]}
DiscChain chain_from_json(const Json& j, const std::string& path);
Json to_json(const DiscChain& chain);

/// {"params":[..],"points":[[re,im,re,im,..],..]}
SampledCurve curve_from_json(const Json& j, const std::string& path);
Json to_json(const SampledCurve& curve);

/// +infinity (a missing upper bound) is null.
Json number_or_null(const std::optional<double>& v);

Json to_json(const LadderReport& report);
Json to_json(const DistanceEstimate& e);
Json to_json(const SliceReport& r);
Json to_json(const UCandidateReport& r);
Json to_json(const VisibilityReport& r);
Json to_json(const AlmostGeodesicVerdict& v);

}  // namespace kobalab
