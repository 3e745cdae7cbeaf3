//! Moment vectors, homogeneous points and barycentric weights.

use story_moments::{point_average, Axis, MomentVector, RotationAxis, Weights};

fn main() -> story_moments::Result<()> {
    let worry = MomentVector::along(Axis::Concern, 0.6)?;
    let warmth = MomentVector::new(0.2, 0.5, 0.0)?;
    println!("concern {:?}", worry.components());
    println!("dot(worry, warmth) = {:.3}", worry.dot(&warmth));

    // Rotating about the concern axis swaps endearment into justice.
    let r = warmth.rotate_90(RotationAxis::X);
    println!("rotated about X: {:?}", r.components());

    for axis in Axis::ALL {
        println!(
            "{:>10} ({}): +{} / -{}",
            axis.name(),
            axis.kind(),
            axis.positive_pole(),
            axis.negative_pole()
        );
    }

    // A long scene weighs more than a glance.
    let scene = worry.to_point(4.0)?;
    let glance = MomentVector::new(-0.9, 0.0, 0.0)?.to_point(0.5)?;
    let avg = point_average(&[scene, glance])?;
    println!("weighted average {:?}", avg.components());

    let w = Weights::new(0.5, 0.3, 0.2)?;
    println!("f-bar with weights {w}: {:.3}", w.combine(warmth.components()));
    Ok(())
}
