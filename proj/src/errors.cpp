#include "meandev/errors.hpp"

namespace meandev {

void throw_domain(const std::string& what) { throw DomainError(what); }

}  // namespace meandev
