#pragma once

#include "prior/batch.hpp"
#include "prior/camera.hpp"
#include "prior/clip_io.hpp"
#include "prior/curriculum.hpp"
#include "prior/depth_image.hpp"
#include "prior/gait_generator.hpp"
#include "prior/library_io.hpp"
#include "prior/motion_clips.hpp"
#include "prior/obs_buffer.hpp"
#include "prior/observation.hpp"
#include "prior/randomization.hpp"
#include "prior/reward_kernel.hpp"
#include "prior/rollout_io.hpp"
#include "prior/version.hpp"
