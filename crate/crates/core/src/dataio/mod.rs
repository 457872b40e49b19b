//! Reading and writing representations and models, and building datasets.

mod formats;
mod persist;
mod pipeline;

pub use formats::{
    check_counts, format_facts, format_instances_keyed, format_instances_positional, memory_path, parse_facts,
    parse_instances, parse_instances_with_roles, parse_role_order, read_facts, read_instances, read_role_order,
    write_facts, write_instances, write_text, ExpectedCounts, InstanceFormat, ParsedInstances, RoleOrder, JF17K_TEST,
    JF17K_TRAIN,
};
pub use persist::{format_model, load_model, read_model, save_model, SavedModel, MODEL_FORMAT_VERSION};
pub use pipeline::{
    degree_filter, entity_degrees, filter_pipeline, restrict_to_entities, split, strip_ids, DatasetBundle,
    FilterOptions, FilterOutput, Provenance, SplitOutput, Variant,
};
