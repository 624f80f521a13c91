#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace prsg {

using BigInt = boost::multiprecision::cpp_int;

}  // namespace prsg
