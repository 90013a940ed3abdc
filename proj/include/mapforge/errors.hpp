#ifndef MAPFORGE_ERRORS_HPP
#define MAPFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mapforge {

enum class errc {
  invalid_arity,
  invalid_vertex,
  invalid_corner,
  invalid_edge,
  invalid_cycle,
  invalid_input,
  resource_limit,
};

struct error : std::runtime_error {
  errc code;
  error(errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline void require(bool cond, errc c, const std::string& msg) {
  if (!cond) throw error(c, msg);
}

}  // namespace mapforge

#endif
