#ifndef HWT_HWT_HPP
#define HWT_HWT_HPP

#include "ca.hpp"
#include "condense.hpp"
#include "datasets.hpp"
#include "error.hpp"
#include "filtering.hpp"
#include "haar.hpp"
#include "hierarchy.hpp"
#include "matrix.hpp"
#include "random.hpp"
#include "raster.hpp"
#include "text_io.hpp"

#endif // HWT_HWT_HPP
