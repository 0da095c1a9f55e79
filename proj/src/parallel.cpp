#include "cmvwalk/parallel.hpp"

#include <cstdlib>
#include <string>

namespace cmvwalk {

unsigned default_thread_count() {
  const char* env = std::getenv("CMVWALK_THREADS");
  if (env == nullptr) return 1;
  try {
    std::size_t used = 0;
    const long v = std::stol(env, &used);
    if (used != std::string(env).size() || v < 1 || v > 1024) return 1;
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace cmvwalk
