#include "bjump/native_kinds.hpp"
