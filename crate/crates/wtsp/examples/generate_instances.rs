//! Instance generation: the three placement schemes, the three weight
//! classes, file round-trips and the benchmark manifest.
//!
//! ```bash
//! cargo run -p wtsp --example generate_instances
//! ```

use wtsp::instances::io::{instance_to_string, parse_instance, InstanceMeta};
use wtsp::instances::{
    generate_instance, suite_manifest, GeneratorSpec, PlacementKind, WeightClass, WeightConfig,
};

fn main() {
    for placement in PlacementKind::ALL {
        let spec = GeneratorSpec {
            n: 12,
            placement,
            weight_config: WeightConfig::new(WeightClass::C2, 5.0).unwrap(),
            placement_seed: 1,
            weight_seed: 1,
        };
        let instance = generate_instance(&spec).unwrap();
        let coords = instance.coords().unwrap();
        let spread = |f: fn(&(f64, f64)) -> f64| {
            let lo = coords.iter().map(f).fold(f64::INFINITY, f64::min);
            let hi = coords.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        println!(
            "{placement:<7} n=12: x-spread {:>6.0}, y-spread {:>6.0}, weights {:?}",
            spread(|p| p.0),
            spread(|p| p.1),
            instance.weights()
        );

        // file round trip preserves every field
        let text = instance_to_string(&instance, Some(&InstanceMeta::from_spec(&spec)));
        let reloaded = parse_instance(&text).unwrap();
        assert_eq!(reloaded.instance.coords(), instance.coords());
        assert_eq!(reloaded.instance.weights(), instance.weights());
    }

    // weight classes on a fixed placement
    for (class, d) in [(WeightClass::C1, 0.4), (WeightClass::C2, 2.0), (WeightClass::C3, 1.0)] {
        let spec = GeneratorSpec {
            n: 10,
            placement: PlacementKind::Rue,
            weight_config: WeightConfig::new(class, d).unwrap(),
            placement_seed: 2,
            weight_seed: 9,
        };
        let instance = generate_instance(&spec).unwrap();
        println!("{class} d={d}: weights {:?}", instance.weights());
    }

    let manifest = suite_manifest();
    println!("benchmark manifest: {} generator specs", manifest.len());
    println!("first: {}", manifest.first().unwrap().instance_name());
    println!("last:  {}", manifest.last().unwrap().instance_name());
}
