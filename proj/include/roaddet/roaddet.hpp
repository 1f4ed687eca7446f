#pragma once

#include "roaddet/color.hpp"
#include "roaddet/config.hpp"
#include "roaddet/error.hpp"
#include "roaddet/eval.hpp"
#include "roaddet/guided_filter.hpp"
#include "roaddet/morphology.hpp"
#include "roaddet/netpbm.hpp"
#include "roaddet/otsu.hpp"
#include "roaddet/pipeline.hpp"
#include "roaddet/rainsnow.hpp"
#include "roaddet/raster.hpp"
#include "roaddet/scene.hpp"
#include "roaddet/segmentation.hpp"
#include "roaddet/shadow.hpp"
#include "roaddet/specular.hpp"
#include "roaddet/svm.hpp"
#include "roaddet/window.hpp"
